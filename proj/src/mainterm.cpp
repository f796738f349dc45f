#include "rslab/mainterm.hpp"

#include "rslab/errors.hpp"
#include "rslab/fileio.hpp"
#include "rslab/parallel.hpp"
#include "rslab/voronoi.hpp"

#include <nlohmann/json.hpp>

#include <cmath>

namespace rslab {

Real riesz_mean_1(const RankinTable& table, const Real& x) {
    if (x < 0 || x > Real(table.nmax))
        throw ValidationError("riesz_mean_1: x out of [0, nmax]");
    auto m = static_cast<std::size_t>(to_double(floor(x)));
    if (m > table.nmax)
        m = table.nmax;
    return x * table.s0(m) - table.s1(m);
}

namespace {

struct FitResult {
    Real C, Z0, rss;
    std::size_t n = 0;
};

// Normal equations for y ~ C * (x^2/2) + Z0 * x.
FitResult fit_two_term(const std::vector<Real>& xs, const std::vector<Real>& ys,
                       std::size_t lo, std::size_t hi) {
    KahanSum suu, suv, svv, suy, svy;
    for (std::size_t i = lo; i < hi; ++i) {
        Real u = xs[i] * xs[i] / 2;
        const Real& v = xs[i];
        suu.add(u * u);
        suv.add(u * v);
        svv.add(v * v);
        suy.add(u * ys[i]);
        svy.add(v * ys[i]);
    }
    Real a = suu.value(), b = suv.value(), d = svv.value();
    Real det = a * d - b * b;
    FitResult r;
    r.n = hi - lo;
    r.C = (d * suy.value() - b * svy.value()) / det;
    r.Z0 = (a * svy.value() - b * suy.value()) / det;
    KahanSum rss;
    for (std::size_t i = lo; i < hi; ++i) {
        Real resid = ys[i] - r.C * xs[i] * xs[i] / 2 - r.Z0 * xs[i];
        rss.add(resid * resid);
    }
    r.rss = rss.value();
    return r;
}

} // namespace

MainTermConstants calibrate_constants(const RankinTable& table, double X,
                                      const CalibrationOptions& opts) {
    MainTermConstants out;
    if (opts.has_override) {
        out.C = opts.override_C;
        out.Z0 = opts.override_Z0;
        out.est_error_C = 0;
        out.est_error_Z0 = 0;
        out.method = "override";
        return out;
    }
    if (X < 1000 || X > static_cast<double>(table.nmax) / 2)
        throw ValidationError("calibrate_constants: need 1e3 <= X <= nmax/2");
    std::size_t points = std::max<std::size_t>(opts.points, 1000);

    // Midpoint lattice over [X/2, X].
    auto m_lo = static_cast<std::size_t>(std::floor(X / 2));
    auto m_hi = static_cast<std::size_t>(std::floor(X)) - 1;
    std::vector<std::size_t> ms;
    ms.reserve(points);
    if (m_hi - m_lo + 1 <= points) {
        for (std::size_t m = m_lo; m <= m_hi; ++m)
            ms.push_back(m);
    } else {
        double step = static_cast<double>(m_hi - m_lo) / static_cast<double>(points - 1);
        std::size_t prev = 0;
        for (std::size_t i = 0; i < points; ++i) {
            auto m = m_lo + static_cast<std::size_t>(std::llround(i * step));
            if (m > m_hi)
                m = m_hi;
            if (ms.empty() || m != prev)
                ms.push_back(m);
            prev = m;
        }
    }

    std::size_t n = ms.size();
    std::vector<Real> xs(n), ys(n);
    const Real half("0.5");
    if (opts.subtract_voronoi) {
        std::size_t n_sub = std::min(opts.n_sub, table.nmax);
        VoronoiKernel kernel(table, n_sub);
        parallel_for_indexed(n, [&](std::size_t i) {
            Real x = Real(ms[i]) + half;
            xs[i] = x;
            ys[i] = x * table.s0(ms[i]) - table.s1(ms[i]) - kernel.eval(x);
        });
        out.method = "midpoint-lsq voronoi-subtracted n_sub=" + std::to_string(n_sub);
    } else {
        parallel_for_indexed(n, [&](std::size_t i) {
            Real x = Real(ms[i]) + half;
            xs[i] = x;
            ys[i] = x * table.s0(ms[i]) - table.s1(ms[i]);
        });
        out.method = "midpoint-lsq";
    }

    FitResult full = fit_two_term(xs, ys, 0, n);
    Real rms = sqrt(full.rss / Real(n));
    Real rms_limit = 10 * pow(Real(X), Real(9) / 8);
    if (rms > rms_limit)
        throw InternalError("calibration residual RMS exceeds 10*X^{9/8}: corrupted tables?");

    // Covariance-based error: sigma^2 (M^{-1})_{00} with the same normal
    // matrix as the fit.
    KahanSum suu, suv, svv;
    for (std::size_t i = 0; i < n; ++i) {
        Real u = xs[i] * xs[i] / 2;
        suu.add(u * u);
        suv.add(u * xs[i]);
        svv.add(xs[i] * xs[i]);
    }
    Real det = suu.value() * svv.value() - suv.value() * suv.value();
    Real sigma2 = full.rss / Real(n - 2);
    Real cov_C = sigma2 * svv.value() / det;
    Real cov_Z0 = sigma2 * suu.value() / det;

    // Scale-stability probe: fit the lower and upper halves of the range
    // separately; systematic drift shows up as their disagreement.
    FitResult lo_half = fit_two_term(xs, ys, 0, n / 2);
    FitResult hi_half = fit_two_term(xs, ys, n / 2, n);
    Real drift_C = abs(lo_half.C - hi_half.C) / 2;
    Real drift_Z0 = abs(lo_half.Z0 - hi_half.Z0) / 2;

    out.C = full.C;
    out.Z0 = full.Z0;
    out.est_error_C = sqrt(cov_C) > drift_C ? Real(sqrt(cov_C)) : drift_C;
    out.est_error_Z0 = sqrt(cov_Z0) > drift_Z0 ? Real(sqrt(cov_Z0)) : drift_Z0;
    out.calibration_lo = X / 2;
    out.calibration_hi = X;
    return out;
}

Real delta1(const Real& x, const RankinTable& table, const MainTermConstants& constants) {
    Real d1 = riesz_mean_1(table, x);
    return d1 - constants.C / 2 * x * x - constants.Z0 * x;
}

Real delta0(const Real& x, const RankinTable& table, const MainTermConstants& constants) {
    if (x < 0 || x > Real(table.nmax))
        throw ValidationError("delta0: x out of [0, nmax]");
    auto m = static_cast<std::size_t>(to_double(floor(x)));
    if (m > table.nmax)
        m = table.nmax;
    return table.s0(m) - constants.C * x;
}

Quadratic delta1_piece(std::size_t m, const RankinTable& table,
                       const MainTermConstants& constants) {
    if (m > table.nmax)
        throw ValidationError("delta1_piece: interval out of range");
    Quadratic q;
    q.a2 = -constants.C / 2;
    q.a1 = table.s0(m) - constants.Z0;
    q.a0 = -table.s1(m);
    return q;
}

std::string constants_to_json(const MainTermConstants& constants, unsigned digits) {
    nlohmann::ordered_json j;
    j["schema"] = "rml-report-v1";
    j["digits"] = digits;
    j["C"] = to_decimal(constants.C, digits);
    j["Z0"] = to_decimal(constants.Z0, digits);
    j["est_error_C"] = to_decimal(constants.est_error_C, 8);
    j["est_error_Z0"] = to_decimal(constants.est_error_Z0, 8);
    j["calibration_range"] = {constants.calibration_lo, constants.calibration_hi};
    j["method"] = constants.method;
    j["table_hash"] = hash_hex(constants.table_hash);
    return j.dump(2) + "\n";
}

MainTermConstants constants_from_json(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    MainTermConstants c;
    c.C = Real(j.at("C").get<std::string>());
    c.Z0 = Real(j.at("Z0").get<std::string>());
    c.est_error_C = Real(j.at("est_error_C").get<std::string>());
    c.est_error_Z0 = Real(j.at("est_error_Z0").get<std::string>());
    c.calibration_lo = j.at("calibration_range")[0].get<double>();
    c.calibration_hi = j.at("calibration_range")[1].get<double>();
    c.method = j.at("method").get<std::string>();
    c.table_hash = std::stoull(j.at("table_hash").get<std::string>(), nullptr, 16);
    return c;
}

} // namespace rslab
