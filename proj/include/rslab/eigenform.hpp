// Exact Fourier coefficients a(n) of the weight-12 level-1 Hecke eigenform
// (a(n) = tau(n)) and their arithmetic integrity checks.

#pragma once

#include "rslab/real.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace rslab {

struct FormSpec {
    unsigned weight = 12; // kappa; even, and fixed at 12 in this release
    unsigned level = 1;
};

struct EigenformTable {
    std::size_t nmax = 0;
    FormSpec form;
    std::vector<BigInt> a; // a[1..nmax]; a[0] unused

    const BigInt& at(std::size_t n) const { return a[n]; }
};

enum class TauMethod { reference, modular };

// Builds a(n) for n <= nmax from Delta = q * J(q)^8 where
// J(q) = prod (1-q^n)^3 = sum_{j>=0} (-1)^j (2j+1) q^{j(j+1)/2},
// via three successive series squarings.
//
// reference: squarings in exact integers (guarded to nmax <= 1e4 by the
//            quadratic cost of the dense steps).
// modular:   squarings coefficient-wise mod >= 5 word-size primes using
//            number-theoretic transforms, then exact reconstruction by
//            residue combination.  The modulus product exceeds
//            2 * nmax^{(kappa-1)/2 + 1} * max d(n), so the symmetric
//            representative is unique; a surplus-prime consistency check
//            rejects a too-small modulus set as an internal bug.
EigenformTable build_eigenform_table(std::size_t nmax, TauMethod method);

struct HeckeViolation {
    std::string identity; // "multiplicativity" | "prime-power" | "deligne"
    std::uint64_t n1 = 0, n2 = 0;
};

struct HeckeReport {
    std::size_t multiplicative_checked = 0;
    std::size_t prime_power_checked = 0;
    std::size_t deligne_checked = 0;
    std::vector<HeckeViolation> violations;

    bool ok() const { return violations.empty(); }
};

// Scans multiplicativity a(mn)=a(m)a(n) for coprime pairs, the prime-power
// recursion a(p^{j+1}) = a(p)a(p^j) - p^{11} a(p^{j-1}) and the bound
// |a(n)| <= n^{11/2} d(n) (checked exactly as a(n)^2 <= n^11 d(n)^2).
// limit = 0 scans the whole table.
HeckeReport verify_hecke_relations(const EigenformTable& table, std::size_t limit = 0);

struct CongruenceReport {
    std::size_t checked = 0;
    std::vector<std::uint64_t> violations;

    bool ok() const { return violations.empty(); }
};

// Classical check a(n) == sigma_11(n) mod 691, an independent tripwire on
// the convolution pipeline.  Throws InternalError on any violation.
CongruenceReport congruence_check(const EigenformTable& table);

// Cache file: "rankin-cache v1" / "kappa 12" / "nmax N" / lines "n a(n)".
void write_eigenform_cache(const std::string& path, const EigenformTable& table);
EigenformTable read_eigenform_cache(const std::string& path);

} // namespace rslab
