#pragma once

#include <cstdint>
#include <vector>

namespace rslab {

// d(n) for n = 1..nmax (index 0 unused).
std::vector<std::uint32_t> divisor_count_sieve(std::size_t nmax);

// sigma_k(n) mod m for n = 1..nmax.
std::vector<std::uint32_t> sigma_mod_sieve(std::size_t nmax, unsigned k, std::uint32_t m);

std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t powmod_u64(std::uint64_t a, std::uint64_t e, std::uint64_t m);

} // namespace rslab
