#include "rslab/rankin.hpp"

#include "rslab/arith.hpp"
#include "rslab/errors.hpp"
#include "rslab/fileio.hpp"

#include <cmath>
#include <sstream>

namespace rslab {

Rational rankin_coeff_exact(const EigenformTable& eigen, std::size_t n) {
    if (n < 1 || n > eigen.nmax)
        throw ValidationError("rankin_coeff_exact: n out of range");
    BigInt numer = 0;
    for (std::size_t m = 1; m * m <= n; ++m) {
        if (n % (m * m) != 0)
            continue;
        const BigInt& at = eigen.at(n / (m * m));
        numer += pow(BigInt(m), 22) * at * at;
    }
    return Rational(numer, pow(BigInt(n), 11));
}

RankinTable build_rankin_table(const EigenformTable& eigen) {
    std::size_t nmax = eigen.nmax;
    RankinTable table;
    table.nmax = nmax;
    table.digits = working_digits();

    // Numerators of c_n * n^11 via the m^2-multiples loop; ~1.64*nmax
    // multiply-accumulates in exact integers.
    std::vector<BigInt> a_sq(nmax + 1);
    for (std::size_t t = 1; t <= nmax; ++t)
        a_sq[t] = eigen.at(t) * eigen.at(t);

    std::vector<BigInt> numer(nmax + 1, BigInt(0));
    for (std::size_t m = 1; m * m <= nmax; ++m) {
        BigInt m22 = pow(BigInt(m), 22);
        std::size_t mm = m * m;
        for (std::size_t t = 1; t * mm <= nmax; ++t)
            numer[t * mm] += m22 * a_sq[t];
    }

    // Exact Deligne-consequence bound c_n <= sum_{m^2|n} d(n/m^2)^2,
    // compared before rounding:  numer <= bound * n^11.
    auto d = divisor_count_sieve(nmax);
    std::vector<BigInt> bound(nmax + 1, BigInt(0));
    for (std::size_t m = 1; m * m <= nmax; ++m) {
        std::size_t mm = m * m;
        for (std::size_t t = 1; t * mm <= nmax; ++t)
            bound[t * mm] += BigInt(d[t]) * d[t];
    }

    table.c.resize(nmax + 1);
    table.S0.resize(nmax + 1);
    table.S1.resize(nmax + 1);
    table.S0[0] = 0;
    table.S1[0] = 0;
    KahanSum s0, s1;
    for (std::size_t n = 1; n <= nmax; ++n) {
        BigInt n11 = pow(BigInt(n), 11);
        if (numer[n] > bound[n] * n11)
            throw InternalError("c_n exceeds the divisor-square bound at n=" + std::to_string(n));
        if (numer[n] <= 0)
            throw InternalError("c_n not positive at n=" + std::to_string(n));
        table.c[n] = round_once(Rational(numer[n], n11));
        s0.add(table.c[n]);
        s1.add(Real(n) * table.c[n]);
        table.S0[n] = s0.value();
        table.S1[n] = s1.value();
    }
    return table;
}

GrowthFit mean_square_growth(const RankinTable& table, const std::vector<std::size_t>& grid) {
    for (std::size_t x : grid)
        if (x < 2 || x > table.nmax)
            throw ValidationError("mean_square_growth: grid point out of [2, nmax]");

    GrowthFit fit;
    KahanSum acc;
    std::size_t n = 1;
    for (std::size_t x : grid) {
        for (; n <= x; ++n)
            acc.add(table.cn(n) * table.cn(n));
        fit.points.push_back({x, acc.value()});
    }

    // Least squares of log S against {1, log x, log log x}.
    std::size_t npts = fit.points.size();
    if (npts >= 3) {
        Real M[3][3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};
        Real rhs[3] = {0, 0, 0};
        for (const auto& pt : fit.points) {
            Real lx = log(Real(pt.x));
            Real llx = log(lx);
            Real reg[3] = {Real(1), lx, llx};
            Real ls = log(pt.sum_sq);
            for (int i = 0; i < 3; ++i) {
                for (int j = 0; j < 3; ++j)
                    M[i][j] += reg[i] * reg[j];
                rhs[i] += reg[i] * ls;
            }
        }
        // 3x3 Gaussian elimination.
        for (int col = 0; col < 3; ++col) {
            int piv = col;
            for (int r = col + 1; r < 3; ++r)
                if (abs(M[r][col]) > abs(M[piv][col]))
                    piv = r;
            for (int j = 0; j < 3; ++j)
                std::swap(M[col][j], M[piv][j]);
            std::swap(rhs[col], rhs[piv]);
            for (int r = col + 1; r < 3; ++r) {
                Real f = M[r][col] / M[col][col];
                for (int j = col; j < 3; ++j)
                    M[r][j] -= f * M[col][j];
                rhs[r] -= f * rhs[col];
            }
        }
        Real sol[3];
        for (int r = 2; r >= 0; --r) {
            Real s = rhs[r];
            for (int j = r + 1; j < 3; ++j)
                s -= M[r][j] * sol[j];
            sol[r] = s / M[r][r];
        }
        fit.theta = sol[1];
        fit.mu = sol[2];
    } else if (npts == 2) {
        fit.theta = (log(fit.points[1].sum_sq) - log(fit.points[0].sum_sq)) /
                    (log(Real(fit.points[1].x)) - log(Real(fit.points[0].x)));
        fit.mu = 0;
    } else {
        throw ValidationError("mean_square_growth: need at least 2 grid points");
    }
    fit.theta_ok = fit.theta <= Real("1.05");
    return fit;
}

Real short_sum_check(const RankinTable& table, double x, double y) {
    if (x < 0 || y < 1 || x + y > static_cast<double>(table.nmax))
        throw ValidationError("short_sum_check: window out of range");
    auto lo = static_cast<std::size_t>(std::floor(x));
    auto hi = static_cast<std::size_t>(std::floor(x + y));
    return (table.s0(hi) - table.s0(lo)) / Real(y);
}

void write_rankin_cache(const std::string& path, const RankinTable& table,
                        std::uint64_t source_hash) {
    std::ostringstream out;
    out << "rankin-ctable v1\n";
    out << "nmax " << table.nmax << "\n";
    out << "digits " << table.digits << "\n";
    out << "source " << hash_hex(source_hash) << "\n";
    for (std::size_t n = 1; n <= table.nmax; ++n)
        out << n << " " << to_decimal(table.cn(n), table.digits) << "\n";
    atomic_write_text(path, out.str());
}

RankinTable read_rankin_cache(const std::string& path, std::uint64_t expected_source_hash) {
    std::istringstream in(read_text_file(path));
    std::string line, key, hex;
    if (!std::getline(in, line) || line != "rankin-ctable v1")
        throw ValidationError("bad rankin cache header in " + path);
    std::size_t nmax = 0;
    unsigned digits = 0;
    in >> key >> nmax;
    if (key != "nmax" || nmax < 1)
        throw ValidationError("bad nmax in rankin cache");
    in >> key >> digits;
    if (key != "digits" || digits < 30)
        throw ValidationError("bad digits in rankin cache");
    in >> key >> hex;
    if (key != "source")
        throw ValidationError("missing source hash in rankin cache");
    if (hex != hash_hex(expected_source_hash))
        throw ValidationError("stale rankin cache: eigenform cache has changed "
                              "(rebuild with the coeffs command)");

    PrecisionGuard guard(digits);
    RankinTable table;
    table.nmax = nmax;
    table.digits = digits;
    table.c.resize(nmax + 1);
    table.S0.resize(nmax + 1);
    table.S1.resize(nmax + 1);
    table.S0[0] = 0;
    table.S1[0] = 0;
    KahanSum s0, s1;
    for (std::size_t i = 1; i <= nmax; ++i) {
        std::size_t n = 0;
        std::string value;
        if (!(in >> n >> value) || n != i)
            throw ValidationError("truncated rankin cache at line " + std::to_string(i));
        table.c[n] = Real(value);
        s0.add(table.c[n]);
        s1.add(Real(n) * table.c[n]);
        table.S0[n] = s0.value();
        table.S1[n] = s1.value();
    }
    return table;
}

} // namespace rslab
