// Truncated Voronoi-type expansion
//   R_1(x; N) = (2 pi)^{-2} x^{9/8} sum_{n<=N} c_n n^{-7/8}
//               cos(8 pi (n x)^{1/4} - pi/4)
// and the truncation residual R_2 = Delta_1 - R_1.

#pragma once

#include "rslab/mainterm.hpp"
#include "rslab/rankin.hpp"
#include "rslab/real.hpp"

#include <cstddef>
#include <vector>

namespace rslab {

// Per-N preparation shared across many x: weights c_n n^{-7/8} and fourth
// roots n^{1/4} so each term costs one multiply and one cosine.
class VoronoiKernel {
  public:
    VoronoiKernel(const RankinTable& table, std::size_t N);

    std::size_t N() const { return n_; }

    // R_1(x; N) evaluated exactly as written, phase in working precision.
    Real eval(const Real& x) const;

    // Triangle-inequality envelope (2 pi)^{-2} x^{9/8} sum c_n n^{-7/8}.
    Real envelope(const Real& x) const;

  private:
    std::size_t n_;
    std::vector<Real> weight_;
    std::vector<Real> root4_;
    Real weight_sum_;
    Real two_pi_sq_inv_;
    Real eight_pi_;
};

// One-off evaluation (builds the kernel internally).
Real r1(const Real& x, std::size_t N, const RankinTable& table);

struct TruncationSample {
    double x;
    Real delta1;
    Real r1;
    Real residual; // |delta1 - r1|
};

struct TruncationReport {
    double T = 0;
    std::size_t N = 0;
    std::size_t samples = 0;
    Real max_residual;
    Real median_residual;
    Real fitted_c;      // sup of residual / (x^{1.05} + x^{1.55} N^{-1/2})
    Real coeff_smooth;  // least-squares coefficient of x^{1.05}
    Real coeff_tail;    // least-squares coefficient of x^{1.55} N^{-1/2}
    Real n_component;   // coeff_tail * mean(x^{1.55} N^{-1/2}); tracks the
                        // N-dependent part of the residual
    std::vector<TruncationSample> rows;
};

// Samples x at unit-interval midpoints uniformly in [T, 2T] and fits the
// residual |Delta_1 - R_1(.; N)| against x^{1.05} + x^{1.55} N^{-1/2}.
TruncationReport truncation_report(double T, std::size_t N, std::size_t samples,
                                   const RankinTable& table,
                                   const MainTermConstants& constants);

} // namespace rslab
