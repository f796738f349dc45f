// Number-theoretic transforms over a fixed list of word-size primes.
// Internal to the eigenform builder; not part of the public headers.

#pragma once

#include <cstdint>
#include <vector>

namespace rslab::ntt {

struct NttPrime {
    std::uint64_t p;
    std::uint64_t g; // primitive root mod p
};

// 62-bit primes of the form c*2^24 + 1 in descending order, so transform
// sizes up to 2^24 are supported.  Fixed list => reproducible builds.
inline constexpr NttPrime kPrimes[] = {
    {4611686018326724609ull, 3ull},
    {4611686018309947393ull, 5ull},
    {4611686018058289153ull, 5ull},
    {4611686017974403073ull, 3ull},
    {4611686017773076481ull, 3ull},
    {4611686017554972673ull, 5ull},
    {4611686016867106817ull, 3ull},
    {4611686016649003009ull, 17ull},
    {4611686015709478913ull, 3ull},
    {4611686015004835841ull, 3ull},
};
inline constexpr std::size_t kPrimeCount = sizeof(kPrimes) / sizeof(kPrimes[0]);

// Deterministic Miller-Rabin, exact for all 64-bit inputs.
bool is_prime_u64(std::uint64_t n);

// Squares the polynomial held in `a` (mod p) and truncates the result to
// `keep` coefficients.  Transform length is chosen internally.
void square_mod_truncate(std::vector<std::uint64_t>& a, std::size_t keep, const NttPrime& pr);

} // namespace rslab::ntt
