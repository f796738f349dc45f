#include "rslab/largevalue.hpp"

#include "rslab/errors.hpp"
#include "rslab/parallel.hpp"

#include <cctype>
#include <cmath>
#include <random>

namespace rslab {

LargeValueReport find_large_values(double T, double V, const RankinTable& table,
                                   const MainTermConstants& constants, double grid_step) {
    if (2 * T > static_cast<double>(table.nmax))
        throw ValidationError("find_large_values: need 2T <= nmax");
    double v_lo = std::pow(T, 1.0 / 8.0), v_hi = std::pow(T, 1.0 / 5.0);
    if (V < v_lo * (1 - 1e-12) || V > v_hi * (1 + 1e-12))
        throw ValidationError("find_large_values: V outside [T^{1/8}, T^{1/5}]");
    if (grid_step == 0)
        grid_step = V / 8;
    if (grid_step > V / 4)
        throw ValidationError("find_large_values: grid_step must be <= V/4");

    LargeValueReport rep;
    rep.T = T;
    rep.V = V;
    rep.grid_step = grid_step;

    auto count = static_cast<std::size_t>(std::floor(T / grid_step));
    std::vector<Real> vals(count, Real(0));
    Real rT(T), rstep(grid_step), half("0.5");
    parallel_for_indexed(count, [&](std::size_t i) {
        Real x = rT + rstep * (Real(i) + half);
        vals[i] = abs(delta1(x, table, constants));
    });

    Real threshold = Real(V) * rT;
    rep.max_scaled = 0;
    double last_selected = -1e300;
    for (std::size_t i = 0; i < count; ++i) {
        Real scaled = vals[i] / rT;
        if (scaled > rep.max_scaled)
            rep.max_scaled = scaled;
        if (vals[i] > threshold) {
            double x = T + grid_step * (static_cast<double>(i) + 0.5);
            if (x - last_selected >= V) {
                rep.points.push_back(x);
                last_selected = x;
            }
        }
    }
    rep.M = rep.points.size();

    Real L = log(rT);
    Real rV(V);
    Real L5 = L * L * L * L * L;
    Real first = rT / (rV * rV * rV) * L5;
    Real second = pow(rT, 4) / pow(rV, 25) * pow(L, 39);
    rep.bound = first + second;
    rep.ratio = Real(rep.M) / rep.bound;
    rep.first_regime_scaled = Real(rep.M) * rV * rV * rV / (rT * L5);
    return rep;
}

std::string ExponentPair::str() const {
    auto rat = [](const Rational& r) {
        std::string s = numerator(r).str();
        if (denominator(r) != 1)
            s += "/" + denominator(r).str();
        return s;
    };
    return rat(k) + " " + rat(l);
}

ExponentPair pair_A(const ExponentPair& p) {
    if (!p.valid())
        throw ValidationError("pair_A: invalid exponent pair");
    Rational den = 2 * p.k + 2;
    return {p.k / den, (p.k + p.l + 1) / den};
}

ExponentPair pair_B(const ExponentPair& p) {
    if (!p.valid())
        throw ValidationError("pair_B: invalid exponent pair");
    return {p.l - Rational(1, 2), p.k + Rational(1, 2)};
}

ExponentPair pair_convex(const ExponentPair& p1, const ExponentPair& p2,
                         const Rational& lambda) {
    if (!p1.valid() || !p2.valid())
        throw ValidationError("pair_convex: invalid exponent pair");
    if (lambda < 0 || lambda > 1)
        throw ValidationError("pair_convex: lambda must be in [0,1]");
    Rational mu = Rational(1) - lambda;
    return {mu * p1.k + lambda * p2.k, mu * p1.l + lambda * p2.l};
}

namespace {

struct PairParser {
    const std::string& s;
    std::size_t pos = 0;

    explicit PairParser(const std::string& text) : s(text) {}

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos])))
            ++pos;
    }

    char peek() {
        skip_ws();
        return pos < s.size() ? s[pos] : '\0';
    }

    void expect(char c) {
        skip_ws();
        if (pos >= s.size() || s[pos] != c)
            throw ValidationError(std::string("pair expression: expected '") + c + "' at offset " +
                                  std::to_string(pos));
        ++pos;
    }

    Rational rational() {
        skip_ws();
        std::size_t start = pos;
        if (pos < s.size() && (s[pos] == '-' || s[pos] == '+'))
            ++pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos])))
            ++pos;
        if (start == pos)
            throw ValidationError("pair expression: expected number at offset " +
                                  std::to_string(pos));
        BigInt num(s.substr(start, pos - start));
        BigInt den(1);
        if (peek() == '/') {
            ++pos;
            skip_ws();
            std::size_t dstart = pos;
            while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos])))
                ++pos;
            if (dstart == pos)
                throw ValidationError("pair expression: expected denominator");
            den = BigInt(s.substr(dstart, pos - dstart));
        }
        return Rational(num, den);
    }

    ExponentPair expr() {
        char c = peek();
        if (c == 'A' || c == 'B') {
            ++pos;
            expect('(');
            ExponentPair inner = expr();
            expect(')');
            return c == 'A' ? pair_A(inner) : pair_B(inner);
        }
        if (c == 'C') {
            ++pos;
            expect('(');
            Rational lambda = rational();
            expect(';');
            ExponentPair p1 = expr();
            expect(',');
            ExponentPair p2 = expr();
            expect(')');
            return pair_convex(p1, p2, lambda);
        }
        expect('(');
        Rational k = rational();
        expect(',');
        Rational l = rational();
        expect(')');
        ExponentPair p{k, l};
        if (!p.valid())
            throw ValidationError("pair expression: (" + p.str() + ") is not an exponent pair");
        return p;
    }
};

} // namespace

ExponentPair parse_pair_expr(const std::string& text) {
    PairParser parser(text);
    ExponentPair p = parser.expr();
    parser.skip_ws();
    if (parser.pos != text.size())
        throw ValidationError("pair expression: trailing input at offset " +
                              std::to_string(parser.pos));
    return p;
}

LipschitzReport lipschitz_probe(double T, std::size_t probes, const RankinTable& table,
                                const MainTermConstants& constants, std::uint64_t seed) {
    if (2 * T + 1 > static_cast<double>(table.nmax))
        throw ValidationError("lipschitz_probe: need 2T + 1 <= nmax");
    if (probes < 1)
        throw ValidationError("lipschitz_probe: need at least one probe");

    LipschitzReport rep;
    rep.T = T;
    rep.probes = probes;
    rep.max_ratio = 0;

    std::mt19937_64 rng(seed);
    auto unit = [&rng]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    for (std::size_t i = 0; i < probes; ++i) {
        double x = T + unit() * T;
        double y = unit();
        if (y <= 0)
            y = 0.5;
        Real rx(x), ry(y);
        Real num = abs(delta1(rx + ry, table, constants) - delta1(rx, table, constants));
        Real ratio = num / (rx * ry);
        if (ratio > rep.max_ratio) {
            rep.max_ratio = ratio;
            rep.argmax_x = x;
            rep.argmax_y = y;
        }
    }
    return rep;
}

} // namespace rslab
