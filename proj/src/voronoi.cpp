#include "rslab/voronoi.hpp"

#include "rslab/errors.hpp"
#include "rslab/parallel.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace rslab {

VoronoiKernel::VoronoiKernel(const RankinTable& table, std::size_t N) : n_(N) {
    if (N < 1 || N > table.nmax)
        throw ValidationError("VoronoiKernel: need 1 <= N <= nmax");
    weight_.resize(N + 1);
    root4_.resize(N + 1);
    KahanSum wsum;
    for (std::size_t n = 1; n <= N; ++n) {
        Real rn(n);
        root4_[n] = quartic_root(rn);
        // n^{-7/8} = (n^{1/4})^{-7/2}
        Real r2 = root4_[n] * root4_[n];
        weight_[n] = table.cn(n) / (r2 * r2 * r2 * sqrt(r2));
        wsum.add(weight_[n]);
    }
    weight_sum_ = wsum.value();
    Real pi = pi_value();
    two_pi_sq_inv_ = 1 / (4 * pi * pi);
    eight_pi_ = 8 * pi;
}

Real VoronoiKernel::eval(const Real& x) const {
    if (x <= 1)
        throw ValidationError("R_1 requires x > 1");
    Real xq = quartic_root(x);
    Real quarter_pi = eight_pi_ / 32;
    KahanSum acc;
    Real phase;
    for (std::size_t n = 1; n <= n_; ++n) {
        phase = eight_pi_ * root4_[n] * xq - quarter_pi;
        acc.add(weight_[n] * cos(phase));
    }
    // x^{9/8} = (x^{1/4})^{9/2}
    Real x98 = pow(xq, 4) * sqrt(xq);
    Real value = two_pi_sq_inv_ * x98 * acc.value();
#ifndef NDEBUG
    assert(abs(value) <= two_pi_sq_inv_ * x98 * weight_sum_ * (1 + Real("1e-20")));
#endif
    return value;
}

Real VoronoiKernel::envelope(const Real& x) const {
    Real xq = quartic_root(x);
    return two_pi_sq_inv_ * pow(xq, 4) * sqrt(xq) * weight_sum_;
}

Real r1(const Real& x, std::size_t N, const RankinTable& table) {
    return VoronoiKernel(table, N).eval(x);
}

TruncationReport truncation_report(double T, std::size_t N, std::size_t samples,
                                   const RankinTable& table,
                                   const MainTermConstants& constants) {
    if (samples < 2)
        throw ValidationError("truncation_report: need >= 2 samples");
    if (!(N >= 1) || static_cast<double>(N) > T ||
        2 * T > static_cast<double>(table.nmax))
        throw ValidationError("truncation_report: need N <= T <= nmax/2");

    VoronoiKernel kernel(table, N);
    TruncationReport rep;
    rep.T = T;
    rep.N = N;

    // Unit-interval midpoints spread evenly over [T, 2T].
    std::vector<std::size_t> ms;
    ms.reserve(samples);
    {
        auto m_lo = static_cast<std::size_t>(std::floor(T));
        auto m_hi = static_cast<std::size_t>(std::floor(2 * T)) - 1;
        double step = static_cast<double>(m_hi - m_lo) / static_cast<double>(samples - 1);
        std::size_t prev = SIZE_MAX;
        for (std::size_t i = 0; i < samples; ++i) {
            auto m = m_lo + static_cast<std::size_t>(std::llround(i * step));
            if (m > m_hi)
                m = m_hi;
            if (m != prev)
                ms.push_back(m);
            prev = m;
        }
    }
    rep.samples = ms.size();
    rep.rows.resize(ms.size());
    const Real half("0.5");
    parallel_for_indexed(ms.size(), [&](std::size_t i) {
        Real x = Real(ms[i]) + half;
        Real d1 = delta1(x, table, constants);
        Real v = kernel.eval(x);
        rep.rows[i] = {to_double(x), d1, v, abs(d1 - v)};
    });

    // Summary statistics and the two-regressor fit of the residual against
    // u = x^{1.05} and v = x^{1.55} N^{-1/2}.
    std::vector<Real> sorted;
    sorted.reserve(rep.rows.size());
    Real inv_sqrt_n = 1 / sqrt(Real(N));
    KahanSum suu, suv, svv, sur, svr, svbar;
    rep.max_residual = 0;
    rep.fitted_c = 0;
    for (const auto& row : rep.rows) {
        Real x(row.x);
        Real u = pow(x, Real("1.05"));
        Real v = pow(x, Real("1.55")) * inv_sqrt_n;
        suu.add(u * u);
        suv.add(u * v);
        svv.add(v * v);
        sur.add(u * row.residual);
        svr.add(v * row.residual);
        svbar.add(v);
        sorted.push_back(row.residual);
        if (row.residual > rep.max_residual)
            rep.max_residual = row.residual;
        Real ratio = row.residual / (u + v);
        if (ratio > rep.fitted_c)
            rep.fitted_c = ratio;
    }
    std::sort(sorted.begin(), sorted.end());
    rep.median_residual = sorted[sorted.size() / 2];

    Real det = suu.value() * svv.value() - suv.value() * suv.value();
    rep.coeff_smooth = (svv.value() * sur.value() - suv.value() * svr.value()) / det;
    rep.coeff_tail = (suu.value() * svr.value() - suv.value() * sur.value()) / det;
    // Negative coefficients mean the regressor is not needed at this scale;
    // refit with the other alone so components stay non-negative.
    if (rep.coeff_tail < 0) {
        rep.coeff_tail = 0;
        rep.coeff_smooth = sur.value() / suu.value();
    } else if (rep.coeff_smooth < 0) {
        rep.coeff_smooth = 0;
        rep.coeff_tail = svr.value() / svv.value();
    }
    rep.n_component = rep.coeff_tail * svbar.value() / Real(rep.rows.size());
    return rep;
}

} // namespace rslab
