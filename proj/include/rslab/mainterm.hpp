// Main-term constants of the once-integrated counting function
//   D_1(x) = sum_{n<=x} (x-n) c_n = (C/2) x^2 + Z0 x + Delta_1(x)
// and exact piecewise-quadratic evaluation of Delta(x), Delta_1(x).
//
// C is pi^2 kappa R_0 / 6 in closed form, but the defining Petersson-norm
// integral is not evaluated here; (C, Z0) are calibrated numerically from
// the table and carried with error estimates.

#pragma once

#include "rslab/rankin.hpp"
#include "rslab/real.hpp"

#include <cstdint>
#include <string>

namespace rslab {

struct MainTermConstants {
    Real C;
    Real Z0;
    Real est_error_C;
    Real est_error_Z0;
    double calibration_lo = 0;
    double calibration_hi = 0;
    std::string method;
    std::uint64_t table_hash = 0;
};

struct CalibrationOptions {
    bool subtract_voronoi = true; // remove R_1(x; n_sub) before the fit
    std::size_t n_sub = 10000;
    std::size_t points = 2000; // sample count (>= 1000 by contract)
    Real override_C;           // used verbatim when has_override
    Real override_Z0;
    bool has_override = false;
};

// Least squares for (C, Z0) on the model D_1(x) = (C/2) x^2 + Z0 x over
// midpoint samples x = m + 1/2 in [X/2, X].  Midpoints avoid the kinks of
// D_1 at integers.  With subtract_voronoi the dominant oscillation
// R_1(x; n_sub) is removed from the samples first, which shrinks the
// residual the fit has to average away.  est_error combines the residual
// covariance with a split-half stability probe; the residual RMS is
// required to stay below 10 * X^{9/8}.
MainTermConstants calibrate_constants(const RankinTable& table, double X,
                                      const CalibrationOptions& opts = {});

// D_1(x) via prefix sums (exact between integers).
Real riesz_mean_1(const RankinTable& table, const Real& x);

// Delta_1(x) = x S0(floor x) - S1(floor x) - (C/2) x^2 - Z0 x.
Real delta1(const Real& x, const RankinTable& table, const MainTermConstants& constants);

// Delta(x) = S0(floor x) - C x.
Real delta0(const Real& x, const RankinTable& table, const MainTermConstants& constants);

// On [m, m+1) the error term is the exact quadratic
//   Delta_1(x) = -(C/2) x^2 + (S0(m) - Z0) x - S1(m).
struct Quadratic {
    Real a2, a1, a0;
    Real eval(const Real& x) const { return (a2 * x + a1) * x + a0; }
};
Quadratic delta1_piece(std::size_t m, const RankinTable& table,
                       const MainTermConstants& constants);

std::string constants_to_json(const MainTermConstants& constants, unsigned digits);
MainTermConstants constants_from_json(const std::string& text);

} // namespace rslab
