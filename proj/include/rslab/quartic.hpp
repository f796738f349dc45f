// Vanishing signed sums of fourth roots, the truncated singular series
// s_{k;l}(f;y), and the moment constants B_k(f;y).
//
// Zero testing rests on n = m^4 q with q fourth-power-free: fourth roots of
// distinct fourth-power-free integers are linearly independent over Q, so a
// signed sum vanishes iff the per-kernel-class multiplier sums vanish.  The
// enumeration works class by class; an independent high-precision
// certificate (with the algebraic-conjugate separation threshold) cross-
// checks it.

#pragma once

#include "rslab/rankin.hpp"
#include "rslab/real.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace rslab {

struct KernelDecomp {
    std::uint64_t n = 0;
    std::uint64_t m = 0; // n = m^4 * q
    std::uint64_t q = 0; // fourth-power-free
};

KernelDecomp kernel_decompose(std::uint64_t n);

struct SignedTuple {
    std::vector<std::uint64_t> n; // size k
    std::vector<int> i;           // size k-1 over {0,1}; sign of slot j+1 is (-1)^{i_j}

    int k() const { return static_cast<int>(n.size()); }
    int weight() const { // |i|
        int s = 0;
        for (int b : i)
            s += b;
        return s;
    }
    int beta() const { return k() - 2 * weight(); }
};

// The sign pattern of the split equation
//   n_1^{1/4} + ... + n_l^{1/4} = n_{l+1}^{1/4} + ... + n_k^{1/4},
// i.e. i_j = 0 for j+1 <= l and 1 otherwise.
std::vector<int> split_pattern(int k, int l);

// Calls cb for every ordered tuple (n_1..n_k) in [1,y]^k whose signed sum
// of fourth roots vanishes.  signs[j] in {+1,-1}, signs[0] = +1.
// Deterministic order (partitions, then kernel classes ascending).
void for_each_zero_sum(const std::vector<int>& signs, std::uint64_t y,
                       const std::function<void(const std::vector<std::uint64_t>&)>& cb);

// All solutions of the split equation as SignedTuple values (k in [2,6]).
std::vector<SignedTuple> enumerate_zero_sums(int k, int l, std::uint64_t y);

struct SeparationCertificate {
    bool is_zero = false;
    Real alpha;     // certified value when nonzero
    Real threshold; // half the conjugate-product separation bound
    unsigned digits = 0;
};

// Evaluates alpha at a precision derived from the separation bound
//   |alpha| >= k^{1-4^{k-1}} max(n)^{-(4^{k-2}-1/4)}  (when nonzero)
// and flags zero when |alpha| falls below half that bound.  Rejects tuples
// needing more than 512 digits.
SeparationCertificate separation_certificate(const SignedTuple& t);

struct SeriesValue {
    int k = 0;
    int l = 0;
    std::uint64_t y = 0;
    Real value;
    std::uint64_t term_count = 0;
};

// s_{k;l}(f;y) = sum over solutions of f(n_1)...f(n_k) / (n_1...n_k)^{7/8}.
SeriesValue s_value(int k, int l, std::uint64_t y, const RankinTable& table);
SeriesValue s_value_f(int k, int l, std::uint64_t y,
                      const std::function<Real(std::uint64_t)>& f);

struct BkValue {
    int k = 0;
    std::uint64_t y = 0;
    Real binomial_form; // sum_l C(k-1,l) s_{k;l} cos(pi(k-2l)/4)
    Real pattern_form;  // sum over sign patterns of cos(-pi beta/4) S(c;i;y)
    std::vector<SeriesValue> s_values;
};

// Computes B_k(c;y) along both routes and verifies they agree at working
// precision (InternalError otherwise).
BkValue b_k(int k, std::uint64_t y, const RankinTable& table);

struct ConvergencePoint {
    std::uint64_t y;
    Real s;
    Real step; // s(y) - s(y/2), 0 for the first grid point
};

struct ConvergenceReport {
    int k = 0, l = 0;
    std::vector<ConvergencePoint> points;
    Real slope;            // OLS slope of log step vs log y
    bool slope_ok = false; // slope <= -0.6
    bool cauchy_ok = false;
};

// Decay of the truncation error along a dyadic grid of cutoffs.
ConvergenceReport convergence_check(int k, int l, const std::vector<std::uint64_t>& y_grid,
                                    const RankinTable& table);

} // namespace rslab
