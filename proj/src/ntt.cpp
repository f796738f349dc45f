#include "ntt.hpp"

#include "rslab/arith.hpp"
#include "rslab/errors.hpp"

#include <algorithm>

namespace rslab::ntt {

bool is_prime_u64(std::uint64_t n) {
    if (n < 2)
        return false;
    for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0)
            return n == p;
    }
    std::uint64_t d = n - 1;
    int r = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++r;
    }
    // This witness set decides primality for every n < 3.3e24.
    for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        std::uint64_t x = powmod_u64(a, d, n);
        if (x == 1 || x == n - 1)
            continue;
        bool composite = true;
        for (int i = 1; i < r; ++i) {
            x = mulmod_u64(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite)
            return false;
    }
    return true;
}

namespace {

// In-place iterative radix-2 transform; `a.size()` must be a power of two
// dividing p-1.  `root` must be a primitive a.size()-th root of unity.
void transform(std::vector<std::uint64_t>& a, std::uint64_t root, std::uint64_t p) {
    std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1)
            j ^= bit;
        j ^= bit;
        if (i < j)
            std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        std::uint64_t w_len = powmod_u64(root, n / len, p);
        for (std::size_t i = 0; i < n; i += len) {
            std::uint64_t w = 1;
            for (std::size_t j = 0; j < len / 2; ++j) {
                std::uint64_t u = a[i + j];
                std::uint64_t v = mulmod_u64(a[i + j + len / 2], w, p);
                a[i + j] = u + v < p ? u + v : u + v - p;
                a[i + j + len / 2] = u >= v ? u - v : u + p - v;
                w = mulmod_u64(w, w_len, p);
            }
        }
    }
}

} // namespace

void square_mod_truncate(std::vector<std::uint64_t>& a, std::size_t keep, const NttPrime& pr) {
    std::size_t result_len = 2 * a.size() - 1;
    std::size_t size = 1;
    while (size < result_len)
        size <<= 1;
    if ((pr.p - 1) % size != 0)
        throw InternalError("transform size not supported by modulus");

    std::vector<std::uint64_t> buf(size, 0);
    std::copy(a.begin(), a.end(), buf.begin());

    std::uint64_t root = powmod_u64(pr.g, (pr.p - 1) / size, pr.p);
    transform(buf, root, pr.p);
    for (auto& v : buf)
        v = mulmod_u64(v, v, pr.p);
    std::uint64_t inv_root = powmod_u64(root, pr.p - 2, pr.p); // root^{-1}
    transform(buf, inv_root, pr.p);
    std::uint64_t inv_n = powmod_u64(size % pr.p, pr.p - 2, pr.p);
    for (auto& v : buf)
        v = mulmod_u64(v, inv_n, pr.p);

    a.assign(buf.begin(), buf.begin() + static_cast<std::ptrdiff_t>(keep));
}

} // namespace rslab::ntt
