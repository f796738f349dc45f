#include "rslab/arith.hpp"

namespace rslab {

std::vector<std::uint32_t> divisor_count_sieve(std::size_t nmax) {
    std::vector<std::uint32_t> d(nmax + 1, 0);
    for (std::size_t i = 1; i <= nmax; ++i)
        for (std::size_t j = i; j <= nmax; j += i)
            ++d[j];
    return d;
}

std::vector<std::uint32_t> sigma_mod_sieve(std::size_t nmax, unsigned k, std::uint32_t m) {
    std::vector<std::uint32_t> s(nmax + 1, 0);
    for (std::size_t i = 1; i <= nmax; ++i) {
        std::uint32_t ik = static_cast<std::uint32_t>(powmod_u64(i % m, k, m));
        for (std::size_t j = i; j <= nmax; j += i)
            s[j] = (s[j] + ik) % m;
    }
    return s;
}

std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod_u64(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1)
            r = mulmod_u64(r, a, m);
        a = mulmod_u64(a, a, m);
        e >>= 1;
    }
    return r;
}

} // namespace rslab
