// Rankin-Selberg coefficients c_n = n^{1-kappa} sum_{m^2|n} m^{2(kappa-1)}
// a(n/m^2)^2, their prefix sums, and growth diagnostics.

#pragma once

#include "rslab/eigenform.hpp"
#include "rslab/real.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace rslab {

struct RankinTable {
    std::size_t nmax = 0;
    unsigned digits = 0;
    std::vector<Real> c;  // c[1..nmax]
    std::vector<Real> S0; // S0[m] = sum_{n<=m} c_n,   S0[0] = 0
    std::vector<Real> S1; // S1[m] = sum_{n<=m} n*c_n, S1[0] = 0

    const Real& cn(std::size_t n) const { return c[n]; }
    const Real& s0(std::size_t m) const { return S0[m]; }
    const Real& s1(std::size_t m) const { return S1[m]; }
};

// Exact-rational route for a single coefficient; the spot-check oracle for
// the table builder.
Rational rankin_coeff_exact(const EigenformTable& eigen, std::size_t n);

// Builds the table at the current working precision.  Each c_n is formed as
// an exact rational and rounded once; the bound
//   c_n <= sum_{m^2|n} d(n/m^2)^2
// is checked exactly before rounding, and prefix sums use compensated
// summation.
RankinTable build_rankin_table(const EigenformTable& eigen);

struct GrowthFitPoint {
    std::size_t x;
    Real sum_sq; // sum_{n<=x} c_n^2
};

struct GrowthFit {
    std::vector<GrowthFitPoint> points;
    Real theta; // fitted exponent in sum ~ x^theta (log x)^mu
    Real mu;
    bool theta_ok = false; // theta <= 1.05
};

// Mean-square growth sum_{n<=x} c_n^2 on a grid (ascending x values).
GrowthFit mean_square_growth(const RankinTable& table, const std::vector<std::size_t>& grid);

// (S0(floor(x+y)) - S0(floor(x))) / y; the short-interval mean of c_n.
Real short_sum_check(const RankinTable& table, double x, double y);

// Derived cache: "rankin-ctable v1" / "nmax N" / "digits D" /
// "source <hex of the producing eigenform cache>" / lines "n c_n".
void write_rankin_cache(const std::string& path, const RankinTable& table,
                        std::uint64_t source_hash);
RankinTable read_rankin_cache(const std::string& path, std::uint64_t expected_source_hash);

} // namespace rslab
