// Large-value counting for Delta_1 (well-spaced exceedances of V*T on
// [T, 2T]) and the exponent-pair calculus used by the van der Corput
// machinery.

#pragma once

#include "rslab/mainterm.hpp"
#include "rslab/rankin.hpp"
#include "rslab/real.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace rslab {

struct LargeValueReport {
    double T = 0;
    double V = 0;
    double grid_step = 0;
    std::size_t M = 0;           // selected points (V-spaced exceedances)
    std::vector<double> points;  // the x_r
    Real bound;                  // T V^{-3} L^5 + T^4 V^{-25} L^39, L = log T
    Real ratio;                  // M / bound
    Real first_regime_scaled;    // M V^3 / (T L^5)
    Real max_scaled;             // max |Delta_1(x)| / T observed on the grid
};

// Scans [T, 2T] at grid midpoints with the given step and greedily selects
// left-to-right points with |Delta_1(x)| > V*T and pairwise spacing >= V.
// The admissible range T^{1/8} <= V <= T^{1/5} is enforced; grid_step <= V/4
// (default V/8).
LargeValueReport find_large_values(double T, double V, const RankinTable& table,
                                   const MainTermConstants& constants,
                                   double grid_step = 0);

struct ExponentPair {
    Rational k, l;

    bool valid() const {
        return k >= 0 && Rational(2) * k <= 1 && Rational(2) * l >= 1 && l <= 1;
    }
    std::string str() const;
};

// A(k,l) = (k/(2k+2), (k+l+1)/(2k+2))
ExponentPair pair_A(const ExponentPair& p);
// B(k,l) = (l - 1/2, k + 1/2)
ExponentPair pair_B(const ExponentPair& p);
// C_lambda(p1, p2) = (1-lambda) p1 + lambda p2
ExponentPair pair_convex(const ExponentPair& p1, const ExponentPair& p2, const Rational& lambda);

// Grammar: expr := A(expr) | B(expr) | C(rat; expr, expr) | (rat, rat)
// with rat := integer['/'integer].  Example: "C(6/11; (0,1),(1/6,4/6))".
ExponentPair parse_pair_expr(const std::string& text);

struct LipschitzReport {
    double T = 0;
    std::size_t probes = 0;
    Real max_ratio; // sup |Delta_1(x+y)-Delta_1(x)| / (x y)
    double argmax_x = 0;
    double argmax_y = 0;
};

// Empirical constant in |Delta_1(x+y) - Delta_1(x)| <= c0 x y over random
// probes x in [T, 2T], y in (0, 1].  Deterministic for a fixed seed.
LipschitzReport lipschitz_probe(double T, std::size_t probes, const RankinTable& table,
                                const MainTermConstants& constants,
                                std::uint64_t seed = 12345);

} // namespace rslab
