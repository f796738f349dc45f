#include "rslab/moments.hpp"

#include "rslab/errors.hpp"
#include "rslab/parallel.hpp"
#include "rslab/voronoi.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace rslab {

namespace {

Real powi(const Real& base, unsigned k) {
    Real r(1);
    for (unsigned i = 0; i < k; ++i)
        r *= base;
    return r;
}

} // namespace

const GaussLegendreRule& gauss_legendre(unsigned n) {
    static std::map<std::pair<unsigned, unsigned>, GaussLegendreRule> cache;
    static std::mutex mtx;
    if (n < 1)
        throw ValidationError("gauss_legendre: need n >= 1");
    unsigned digits = working_digits();
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find({n, digits});
    if (it != cache.end())
        return it->second;

    GaussLegendreRule rule;
    rule.nodes.assign(n, Real(0));
    rule.weights.assign(n, Real(0));
    {
        PrecisionGuard guard(2 * digits);
        Real pi = pi_value();
        Real eps = pow(Real(10), -static_cast<int>(2 * digits - 4));
        for (unsigned i = 0; i < (n + 1) / 2; ++i) {
            Real x = cos(pi * (Real(i) + Real("0.75")) / (Real(n) + Real("0.5")));
            Real dp(0);
            for (int iter = 0; iter < 200; ++iter) {
                Real p0(1), p1 = x;
                for (unsigned j = 2; j <= n; ++j) {
                    Real p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
                    p0 = p1;
                    p1 = p2;
                }
                if (n == 1) {
                    p1 = x;
                    p0 = 1;
                }
                dp = n * (x * p1 - p0) / (x * x - 1);
                Real dx = p1 / dp;
                x -= dx;
                if (abs(dx) < eps)
                    break;
            }
            Real w = 2 / ((1 - x * x) * dp * dp);
            // Map from [-1,1] (x descending in i) to ascending nodes on [0,1].
            rule.nodes[i] = demote((1 - x) / 2);
            rule.weights[i] = demote(w / 2);
            rule.nodes[n - 1 - i] = demote((1 + x) / 2);
            rule.weights[n - 1 - i] = rule.weights[i];
        }
    }
    auto [pos, inserted] = cache.emplace(std::make_pair(n, digits), std::move(rule));
    return pos->second;
}

Real exact_moment(int k, double T1, double T2, const RankinTable& table,
                  const MainTermConstants& constants) {
    if (k < 1 || k > 10)
        throw ValidationError("exact_moment: need 1 <= k <= 10");
    if (!(T1 >= 1) || !(T1 < T2) || T2 > static_cast<double>(table.nmax))
        throw ValidationError("exact_moment: need 1 <= T1 < T2 <= nmax");

    const GaussLegendreRule& rule = gauss_legendre(static_cast<unsigned>(k) + 1);
    auto m_first = static_cast<std::size_t>(std::floor(T1));
    auto m_last = static_cast<std::size_t>(std::ceil(T2)) - 1;
    std::size_t n_intervals = m_last - m_first + 1;

    constexpr std::size_t kBlock = 2048;
    std::size_t n_blocks = (n_intervals + kBlock - 1) / kBlock;
    std::vector<Real> partial(n_blocks, Real(0));
    Real rT1(T1), rT2(T2);

    parallel_for_indexed(n_blocks, [&](std::size_t b) {
        std::size_t lo = m_first + b * kBlock;
        std::size_t hi = std::min(m_last, lo + kBlock - 1);
        KahanSum acc;
        for (std::size_t m = lo; m <= hi; ++m) {
            Real a = Real(m) < rT1 ? rT1 : Real(m);
            Real bnd = Real(m + 1) > rT2 ? rT2 : Real(m + 1);
            Real len = bnd - a;
            if (len <= 0)
                continue;
            Quadratic q = delta1_piece(m, table, constants);
            KahanSum piece;
            for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
                Real x = a + len * rule.nodes[i];
                piece.add(rule.weights[i] * powi(q.eval(x), static_cast<unsigned>(k)));
            }
            acc.add(len * piece.value());
        }
        partial[b] = acc.value();
    });

    KahanSum total;
    for (const Real& p : partial)
        total.add(p);
    return total.value();
}

Real predicted_moment(int k, double T, const Real& bk_value) {
    if (k < 2 || k > 6)
        throw ValidationError("predicted_moment: need 2 <= k <= 6");
    if (T <= 1)
        throw ValidationError("predicted_moment: need T > 1");
    BigInt denom_int = BigInt(8 + 9 * k) << (3 * k - 4);
    Real pi = pi_value();
    Real denom = Real(denom_int) * powi(pi, static_cast<unsigned>(2 * k));
    Real exponent = Real(8 + 9 * k) / 8;
    return bk_value * pow(Real(T), exponent) / denom;
}

ExponentBook exponent_book(int k, const Rational& A0) {
    if (k < 3 || Rational(k) >= A0)
        throw ValidationError("exponent_book: need 3 <= k < A0");
    ExponentBook book;
    book.A0 = A0;

    BigInt num = numerator(A0), den = denominator(A0);
    BigInt q = num / den; // floor for positive A0
    long ceil_A0 = q.convert_to<long>() + (q * den == num ? 0 : 1);
    book.K0 = ceil_A0 % 2 == 0 ? ceil_A0 : ceil_A0 + 1;

    auto b_of = [](long kk) {
        return Rational(pow(BigInt(4), static_cast<unsigned>(kk - 2))) + Rational(kk - 2, 8);
    };
    book.b_k = b_of(k);
    book.sigma = Rational(3) * (A0 - k) / (Rational(4) * (A0 - 2));
    book.delta1 = book.sigma / (Rational(4) * b_of(book.K0));
    book.delta2 = book.sigma / (Rational(4) * book.b_k + Rational(4) * book.sigma);
    return book;
}

MomentReport moment_report(int k, double T, std::uint64_t y, const RankinTable& table,
                           const MainTermConstants& constants) {
    if (k < 2 || k > 5)
        throw ValidationError("moment_report: need 2 <= k <= 5");
    MomentReport rep;
    rep.k = k;
    rep.T = T;
    rep.y = y;

    Real bk = k == 2 ? s_value(2, 1, y, table).value : b_k(k, y, table).binomial_form;
    rep.error_exponent = k == 2 ? Rational(1, 4) : exponent_book(k, Rational(16, 3)).delta2;

    // One pass over [1, T]; partials at T/4 and T/2 reuse additivity.
    Real part1 = exact_moment(k, 1, T / 4, table, constants);
    Real part2 = exact_moment(k, T / 4, T / 2, table, constants);
    Real part3 = exact_moment(k, T / 2, T, table, constants);
    Real m1 = part1;
    Real m2 = part1 + part2;
    Real m3 = m2 + part3;

    rep.trend_T = {T / 4, T / 2, T};
    rep.trend_ratio = {m1 / predicted_moment(k, T / 4, bk),
                       m2 / predicted_moment(k, T / 2, bk),
                       m3 / predicted_moment(k, T, bk)};
    rep.measured = m3;
    rep.predicted = predicted_moment(k, T, bk);
    rep.ratio = rep.trend_ratio.back();
    return rep;
}

namespace {

// Integrates f(|p(x)|) over [a,b] after splitting at the quadratic's real
// roots, so every piece has constant sign.
template <typename PieceFn>
Real integrate_abs_pieces(const Quadratic& q, const Real& a, const Real& b, PieceFn&& piece) {
    std::vector<Real> cuts{a};
    Real disc = q.a1 * q.a1 - 4 * q.a2 * q.a0;
    if (disc > 0) {
        Real sq = sqrt(disc);
        Real r1 = (-q.a1 + sq) / (2 * q.a2);
        Real r2 = (-q.a1 - sq) / (2 * q.a2);
        if (r1 > r2)
            std::swap(r1, r2);
        if (r1 > a && r1 < b)
            cuts.push_back(r1);
        if (r2 > a && r2 < b)
            cuts.push_back(r2);
    }
    cuts.push_back(b);
    KahanSum acc;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        Real lo = cuts[i], hi = cuts[i + 1];
        if (hi - lo <= 0)
            continue;
        Real mid = (lo + hi) / 2;
        int sign = q.eval(mid) < 0 ? -1 : +1;
        acc.add(piece(lo, hi, sign));
    }
    return acc.value();
}

} // namespace

BoundReport upper_bound_check(double A, double T, const RankinTable& table,
                              const MainTermConstants& constants) {
    if (A < 0)
        throw ValidationError("upper_bound_check: need A >= 0");
    if (!(T >= 2) || 2 * T > static_cast<double>(table.nmax))
        throw ValidationError("upper_bound_check: need 2 <= T and 2T <= nmax");

    BoundReport rep;
    rep.A = A;
    rep.T = T;
    bool integer_A = std::floor(A) == A && A <= 20;
    rep.exact = integer_A;
    auto kA = static_cast<unsigned>(A);
    const GaussLegendreRule& rule = integer_A ? gauss_legendre(kA + 1) : gauss_legendre(16);
    Real rA(A);

    auto m_first = static_cast<std::size_t>(std::floor(T));
    auto m_last = static_cast<std::size_t>(std::ceil(2 * T)) - 1;
    std::size_t n_intervals = m_last - m_first + 1;
    constexpr std::size_t kBlock = 2048;
    std::size_t n_blocks = (n_intervals + kBlock - 1) / kBlock;
    std::vector<Real> partial(n_blocks, Real(0));
    Real rT1(T), rT2(2 * T);

    parallel_for_indexed(n_blocks, [&](std::size_t blk) {
        std::size_t lo = m_first + blk * kBlock;
        std::size_t hi = std::min(m_last, lo + kBlock - 1);
        KahanSum acc;
        for (std::size_t m = lo; m <= hi; ++m) {
            Real a = Real(m) < rT1 ? rT1 : Real(m);
            Real b = Real(m + 1) > rT2 ? rT2 : Real(m + 1);
            if (b - a <= 0)
                continue;
            Quadratic q = delta1_piece(m, table, constants);
            acc.add(integrate_abs_pieces(q, a, b, [&](const Real& u, const Real& v, int sign) {
                Real len = v - u;
                KahanSum piece;
                for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
                    Real x = u + len * rule.nodes[i];
                    Real val = sign < 0 ? Real(-q.eval(x)) : q.eval(x);
                    piece.add(rule.weights[i] *
                              (integer_A ? powi(val, kA) : pow(val, rA)));
                }
                return Real(len * piece.value());
            }));
        }
        partial[blk] = acc.value();
    });
    KahanSum total;
    for (const Real& p : partial)
        total.add(p);
    rep.measured = total.value();

    Real rT(T);
    Real logT = log(rT);
    if (3 * A <= 16.0 + 1e-12)
        rep.bound = pow(rT, 1 + Real(9) * rA / 8) * powi(logT, 39);
    else
        rep.bound = pow(rT, (3 + 6 * rA) / 5) * powi(logT, 5);
    rep.ratio = rep.measured / rep.bound;
    return rep;
}

namespace {

// Midpoint-sampled mean of fn over unit midpoints in [T, 2T], scaled by T.
// `count` midpoints are spread evenly; the integrand's local mean varies
// slowly so the subsample is an unbiased estimate of the integral.
Real sampled_integral(double T, std::size_t count,
                      const std::function<Real(const Real&)>& fn) {
    auto m_lo = static_cast<std::size_t>(std::floor(T));
    auto m_hi = static_cast<std::size_t>(std::floor(2 * T)) - 1;
    std::size_t span = m_hi - m_lo + 1;
    count = std::min(count, span);
    std::vector<std::size_t> ms;
    ms.reserve(count);
    double step = count == 1 ? 0 : static_cast<double>(span - 1) / static_cast<double>(count - 1);
    std::size_t prev = SIZE_MAX;
    for (std::size_t i = 0; i < count; ++i) {
        auto m = m_lo + static_cast<std::size_t>(std::llround(i * step));
        if (m > m_hi)
            m = m_hi;
        if (m != prev)
            ms.push_back(m);
        prev = m;
    }
    std::vector<Real> vals(ms.size(), Real(0));
    const Real half("0.5");
    parallel_for_indexed(ms.size(), [&](std::size_t i) {
        Real x = Real(ms[i]) + half;
        vals[i] = fn(x);
    });
    KahanSum acc;
    for (const Real& v : vals)
        acc.add(v);
    return Real(T) * acc.value() / Real(vals.size());
}

} // namespace

R2MeanSquareReport r2_mean_square(double T, std::uint64_t y_max, std::uint64_t n_full,
                                  const RankinTable& table,
                                  const MainTermConstants& constants) {
    if (y_max < 16)
        throw ValidationError("r2_mean_square: need y_max >= 16");
    if (!(y_max < n_full) || n_full > table.nmax)
        throw ValidationError("r2_mean_square: need y < N_full <= nmax");
    if (2 * T > static_cast<double>(table.nmax))
        throw ValidationError("r2_mean_square: need 2T <= nmax");

    R2MeanSquareReport rep;
    rep.T = T;
    rep.n_full = n_full;
    rep.samples_per_y = std::min<std::size_t>(static_cast<std::size_t>(T), 4000);

    for (std::uint64_t y = 16; y <= y_max; y *= 2) {
        VoronoiKernel kernel(table, y);
        Real ms = sampled_integral(T, rep.samples_per_y, [&](const Real& x) {
            Real r2 = delta1(x, table, constants) - kernel.eval(x);
            return Real(r2 * r2);
        });
        R2MeanSquarePoint pt;
        pt.y = y;
        pt.mean_square = ms;
        pt.scale_ratio = ms / (pow(Real(T), Real(13) / 4) / pow(Real(y), Real(3) / 4));
        rep.points.push_back(std::move(pt));
    }

    {
        VoronoiKernel kernel(table, n_full);
        rep.tail_route_check = sampled_integral(T, rep.samples_per_y, [&](const Real& x) {
            Real r2 = delta1(x, table, constants) - kernel.eval(x);
            return Real(r2 * r2);
        });
    }

    KahanSum s1, sx, sy_, sxx, sxy;
    for (const auto& pt : rep.points) {
        Real lx = log(Real(pt.y));
        Real ly = log(pt.mean_square);
        s1.add(Real(1));
        sx.add(lx);
        sy_.add(ly);
        sxx.add(lx * lx);
        sxy.add(lx * ly);
    }
    Real det = s1.value() * sxx.value() - sx.value() * sx.value();
    rep.slope = (s1.value() * sxy.value() - sx.value() * sy_.value()) / det;
    rep.slope_ok = rep.slope <= Real("-0.6");
    return rep;
}

MixedMomentReport mixed_moment(int k, double T, std::uint64_t y, const RankinTable& table,
                               const MainTermConstants& constants) {
    if (k < 3 || k > 5)
        throw ValidationError("mixed_moment: need 3 <= k <= 5");
    if (y < 1 || y >= table.nmax)
        throw ValidationError("mixed_moment: need 1 <= y < nmax");
    if (2 * T > static_cast<double>(table.nmax))
        throw ValidationError("mixed_moment: need 2T <= nmax");

    MixedMomentReport rep;
    rep.k = k;
    rep.T = T;
    rep.y = y;

    // Step below the fastest R_1 phase scale on the range.
    double h = std::pow(T, 0.75) / (8.0 * std::pow(static_cast<double>(y), 0.25));
    h = std::min(h, T / 64.0);
    auto M = static_cast<std::size_t>(std::ceil(T / h));
    rep.samples = M + 1;
    rep.step = T / static_cast<double>(M);

    VoronoiKernel kernel(table, y);
    std::vector<Real> vals(M + 1, Real(0));
    std::vector<Real> gaps(M + 1, Real(0));
    Real rT(T), rstep(rep.step);
    parallel_for_indexed(M + 1, [&](std::size_t i) {
        Real x = rT + rstep * Real(i);
        Real r1v = kernel.eval(x);
        Real d1 = delta1(x, table, constants);
        Real r2v = d1 - r1v;
        Real head = powi(r1v, static_cast<unsigned>(k - 1));
        vals[i] = head * r2v;
        gaps[i] = abs(head * r2v - (head * d1 - head * r1v));
    });

    KahanSum acc;
    rep.identity_gap = 0;
    for (std::size_t i = 0; i <= M; ++i) {
        Real w = (i == 0 || i == M) ? Real("0.5") : Real(1);
        acc.add(w * vals[i]);
        if (gaps[i] > rep.identity_gap)
            rep.identity_gap = gaps[i];
    }
    rep.integral = acc.value() * rstep;

    Real eps("0.05");
    Real rTT(T), ry(y);
    Real e98 = 1 + Real(9) * k / 8;
    Rational bk_rat = exponent_book(k, Rational(16, 3)).b_k;
    rep.bound_tail = pow(rTT, e98 + eps) * pow(ry, Real(-3) / 4);
    rep.bound_offdiag = pow(rTT, Real(3) / 4 + Real(9) * k / 8) * pow(ry, Real(bk_rat));
    rep.bound_trunc = pow(rTT, e98 - Real(1) / 8 + eps);
    rep.ratio = abs(rep.integral) / (rep.bound_tail + rep.bound_offdiag + rep.bound_trunc);
    return rep;
}

} // namespace rslab
