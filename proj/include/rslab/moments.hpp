// Power moments of Delta_1: exact piecewise-polynomial integration, the
// predicted main terms with the singular-series constants, the exponent
// bookkeeping rationals, and the auxiliary R_1/R_2 moment bounds.

#pragma once

#include "rslab/mainterm.hpp"
#include "rslab/quartic.hpp"
#include "rslab/rankin.hpp"
#include "rslab/real.hpp"

#include <vector>

namespace rslab {

struct GaussLegendreRule {
    std::vector<Real> nodes;   // on [0,1]
    std::vector<Real> weights; // sum to 1
};

// Cached per (n, working digits); computed by Newton iteration at doubled
// precision.  Exact for polynomials of degree <= 2n-1.
const GaussLegendreRule& gauss_legendre(unsigned n);

// Integral of Delta_1(x)^k over [T1, T2].  On each unit interval Delta_1 is
// the exact quadratic -(C/2)x^2 + (S0(m)-Z0)x - S1(m), so Delta_1^k is a
// degree-2k polynomial handled exactly by the (k+1)-node rule; interval
// results combine by compensated summation in ascending order.
Real exact_moment(int k, double T1, double T2, const RankinTable& table,
                  const MainTermConstants& constants);

// B_k(c;y) * T^{1+9k/8} / ((8+9k) 2^{3k-4} pi^{2k}).
Real predicted_moment(int k, double T, const Real& bk_value);

struct ExponentBook {
    Rational A0;
    long K0 = 0;       // min even integer >= A0
    Rational b_k;      // 4^{k-2} + (k-2)/8
    Rational sigma;    // 3(A0-k) / (4(A0-2))
    Rational delta1;   // sigma / (4 b(K0))
    Rational delta2;   // sigma / (4 b(k) + 4 sigma)
};

ExponentBook exponent_book(int k, const Rational& A0);

struct MomentReport {
    int k = 0;
    double T = 0;
    std::uint64_t y = 0;
    Real measured;  // integral over [1, T]
    Real predicted; // main term at the same T
    Real ratio;
    Rational error_exponent; // the moment remainder saves T^{-this}
    std::vector<double> trend_T;   // T/4, T/2, T
    std::vector<Real> trend_ratio; // measured/predicted at those T
    std::string range = "1..T";
};

MomentReport moment_report(int k, double T, std::uint64_t y, const RankinTable& table,
                           const MainTermConstants& constants);

struct BoundReport {
    double A = 0;
    double T = 0;
    Real measured; // integral of |Delta_1|^A over [T, 2T]
    Real bound;    // T^{1+9A/8} log^39 T for A <= 16/3, else T^{(3+6A)/5} log^5 T
    Real ratio;
    bool exact = false; // per-interval integration was polynomial-exact
};

// Theorem-style upper-bound probe for |Delta_1|^A on [T, 2T].  Integer A is
// handled exactly (odd powers split unit intervals at the quadratic's
// roots); non-integer A uses a fixed 16-node rule per piece.
BoundReport upper_bound_check(double A, double T, const RankinTable& table,
                              const MainTermConstants& constants);

struct R2MeanSquarePoint {
    std::uint64_t y;
    Real mean_square; // integral of (Delta_1 - R_1(.;y))^2 over [T, 2T]
    Real scale_ratio; // mean_square / (T^{13/4} / y^{3/4})
};

struct R2MeanSquareReport {
    double T = 0;
    std::uint64_t n_full = 0;
    std::vector<R2MeanSquarePoint> points; // dyadic y grid up to y_max
    Real slope;                            // fitted decay exponent in y
    bool slope_ok = false;                 // slope <= -0.6
    Real tail_route_check; // mean square at y = n_full: the residual is then
                           // the pure truncation tail and stays small
    std::size_t samples_per_y = 0;
};

// Sampled quadrature of the truncation residual's mean square over a dyadic
// y grid 16, 32, ..., y_max.
R2MeanSquareReport r2_mean_square(double T, std::uint64_t y_max, std::uint64_t n_full,
                                  const RankinTable& table,
                                  const MainTermConstants& constants);

struct MixedMomentReport {
    int k = 0;
    double T = 0;
    std::uint64_t y = 0;
    Real integral; // integral of R_1^{k-1} R_2 over [T, 2T]
    Real bound_tail;     // T^{1+9k/8+eps} y^{-3/4}
    Real bound_offdiag;  // T^{3/4+9k/8} y^{b(k)}
    Real bound_trunc;    // T^{1+9k/8-1/8+eps}
    Real ratio;          // |integral| / (sum of the three)
    Real identity_gap;   // max |R_1^{k-1} R_2 - (R_1^{k-1} Delta_1 - R_1^k)|
    std::size_t samples = 0;
    double step = 0;
};

// Oscillation-aware sampled quadrature of R_1^{k-1} R_2 with step
// h <= x^{3/4} / (8 y^{1/4}), matching the phase-derivative scale of R_1.
MixedMomentReport mixed_moment(int k, double T, std::uint64_t y, const RankinTable& table,
                               const MainTermConstants& constants);

} // namespace rslab
