#include <doctest.h>

#include "rslab/errors.hpp"
#include "rslab/moments.hpp"

#include "support/fixtures.hpp"

using namespace rslab;
using rslab::testing::constant_table;
using rslab::testing::small_constants;
using rslab::testing::small_table;

namespace {

MainTermConstants exact_constants(const Real& C, const Real& Z0) {
    MainTermConstants c;
    c.C = C;
    c.Z0 = Z0;
    c.est_error_C = 0;
    c.est_error_Z0 = 0;
    c.method = "exact";
    return c;
}

// With c_n = 1, C = 1, Z0 = -1/2 the error term on [m, m+1) is exactly
// t(1-t)/2 in t = x - m, so unit-interval moments are beta integrals.
struct SyntheticPipe {
    RankinTable table = constant_table(400, Real(1));
    MainTermConstants constants = exact_constants(Real(1), Real(-1) / 2);
};

} // namespace

TEST_SUITE("moments") {

TEST_CASE("gauss-legendre rules integrate powers of quadratics exactly") {
    // Property run: 100 pseudo-random quadratics, degree-8 integrands, the
    // 5-node rule against the closed-form antiderivative.
    const auto& rule = gauss_legendre(5);
    std::uint64_t state = 88172645463325252ull;
    auto next = [&state]() {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        return static_cast<double>(state >> 11) * 0x1.0p-53 * 4.0 - 2.0;
    };
    for (int trial = 0; trial < 100; ++trial) {
        Real a(next()), b(next()), c(next());
        // Coefficients of p(x)^4 for p = a x^2 + b x + c via convolution.
        std::vector<Real> p{c, b, a}, p4{Real(1)};
        for (int rep = 0; rep < 4; ++rep) {
            std::vector<Real> nxt(p4.size() + p.size() - 1, Real(0));
            for (std::size_t i = 0; i < p4.size(); ++i)
                for (std::size_t j = 0; j < p.size(); ++j)
                    nxt[i + j] += p4[i] * p[j];
            p4 = std::move(nxt);
        }
        Real symbolic(0);
        for (std::size_t i = 0; i < p4.size(); ++i)
            symbolic += p4[i] / Real(i + 1); // integral of x^i over [0,1]
        KahanSum quad;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            Real x = rule.nodes[i];
            Real px = (a * x + b) * x + c;
            quad.add(rule.weights[i] * px * px * px * px);
        }
        CHECK(abs(quad.value() - symbolic) < Real("1e-25") * (1 + abs(symbolic)));
    }
}

TEST_CASE("synthetic moments equal beta integrals") {
    SyntheticPipe pipe;
    // integral over [1, 101] of t(1-t)/2, (t(1-t)/2)^2, (t(1-t)/2)^3 per
    // unit interval: 1/12, 1/120, 1/1120.
    CHECK(abs(exact_moment(1, 1, 101, pipe.table, pipe.constants) - Real(100) / 12) <
          Real("1e-30"));
    CHECK(abs(exact_moment(2, 1, 101, pipe.table, pipe.constants) - Real(100) / 120) <
          Real("1e-30"));
    CHECK(abs(exact_moment(3, 1, 101, pipe.table, pipe.constants) - Real(100) / 1120) <
          Real("1e-30"));
}

TEST_CASE("zero error term gives zero moments") {
    auto table = constant_table(50, Real(0));
    auto constants = exact_constants(Real(0), Real(0));
    CHECK(exact_moment(1, 1, 40, table, constants) == 0);
}

TEST_CASE("odd moments flip sign with the error term") {
    SyntheticPipe pipe;
    RankinTable neg = constant_table(400, Real(-1));
    auto neg_constants = exact_constants(Real(-1), Real(1) / 2);
    Real pos = exact_moment(3, 1, 101, pipe.table, pipe.constants);
    Real flipped = exact_moment(3, 1, 101, neg, neg_constants);
    CHECK(abs(pos + flipped) < Real("1e-30"));
    CHECK(pos > 0);
}

TEST_CASE("moment additivity over adjacent ranges") {
    const auto& t = small_table();
    const auto& c = small_constants();
    Real left = exact_moment(2, 100, 350.5, t, c);
    Real right = exact_moment(2, 350.5, 700, t, c);
    Real whole = exact_moment(2, 100, 700, t, c);
    CHECK(abs(left + right - whole) < Real("1e-25") * (1 + abs(whole)));
    CHECK(whole >= 0);
}

TEST_CASE("guards") {
    const auto& t = small_table();
    const auto& c = small_constants();
    CHECK_THROWS_AS(exact_moment(0, 1, 10, t, c), ValidationError);
    CHECK_THROWS_AS(exact_moment(11, 1, 10, t, c), ValidationError);
    CHECK_THROWS_AS(exact_moment(2, 10, 5, t, c), ValidationError);
    CHECK_THROWS_AS(exact_moment(2, 1, 1e9, t, c), ValidationError);
    CHECK_THROWS_AS(predicted_moment(7, 100, Real(1)), ValidationError);
    CHECK_THROWS_AS(exponent_book(3, Rational(3)), ValidationError);
    CHECK_THROWS_AS(exponent_book(6, Rational(16, 3)), ValidationError);
}

TEST_CASE("predicted-moment coefficient identities") {
    // k=2 coefficient: 1/((8+18) 2^2 pi^4) = (2/13)(2pi)^{-4}.
    Real pi = pi_value();
    Real lhs = predicted_moment(2, 10, Real(1)) / pow(Real(10), Real(13) / 4);
    Real rhs = Real(2) / 13 / pow(2 * pi, 4);
    CHECK(abs(lhs - rhs) / rhs < Real("1e-12"));

    // Corollary denominators 1120, 11264, 108544.
    CHECK((8 + 9 * 3) * (1 << 5) == 1120);
    CHECK((8 + 9 * 4) * (1 << 8) == 11264);
    CHECK((8 + 9 * 5) * (1 << 11) == 108544);
    for (int k : {3, 4, 5}) {
        Real coeff = predicted_moment(k, 10, Real(1)) / pow(Real(10), 1 + Real(9 * k) / 8);
        Real denom = Real((8 + 9 * k) * (1 << (3 * k - 4))) * pow(pi, 2 * k);
        CHECK(abs(coeff * denom - 1) < Real("1e-30"));
    }
}

TEST_CASE("exponent book rationals") {
    auto e3 = exponent_book(3, Rational(16, 3));
    CHECK(e3.K0 == 6);
    CHECK(e3.b_k == Rational(33, 8));
    CHECK(e3.sigma == Rational(21, 40));
    CHECK(e3.delta1 == Rational(7, 13680));
    CHECK(e3.delta2 == Rational(7, 248));

    auto e4 = exponent_book(4, Rational(16, 3));
    CHECK(e4.delta2 == Rational(3, 662));
    CHECK(e4.b_k == Rational(65, 4));

    // From the definitions b(5) = 515/8 and sigma = 3/40, so
    // delta2 = (3/40) / (515/2 + 3/10) = 3/10312.
    auto e5 = exponent_book(5, Rational(16, 3));
    CHECK(e5.b_k == Rational(515, 8));
    CHECK(e5.sigma == Rational(3, 40));
    CHECK(e5.delta2 == Rational(3, 10312));

    auto e4b = exponent_book(4, Rational(6));
    CHECK(e4b.K0 == 6);
}

TEST_CASE("moment report trends on the fixture") {
    const auto& t = small_table();
    const auto& c = small_constants();
    auto rep = moment_report(2, 2000, 512, t, c);
    CHECK(rep.measured > 0);
    CHECK(rep.predicted > 0);
    CHECK(rep.trend_T.size() == 3);
    CHECK(to_double(rep.ratio) > 0.3);
    CHECK(to_double(rep.ratio) < 3.0);
    CHECK(rep.error_exponent == Rational(1, 4));
}

TEST_CASE("upper bound check: A = 0 measures the interval length") {
    const auto& t = small_table();
    const auto& c = small_constants();
    auto rep = upper_bound_check(0, 500, t, c);
    CHECK(abs(rep.measured - 500) < Real("1e-25"));
    CHECK(rep.exact);
}

TEST_CASE("upper bound check: even power equals the exact moment") {
    const auto& t = small_table();
    const auto& c = small_constants();
    auto rep = upper_bound_check(2, 800, t, c);
    Real direct = exact_moment(2, 800, 1600, t, c);
    CHECK(abs(rep.measured - direct) < Real("1e-22") * (1 + abs(direct)));
    CHECK(rep.ratio > 0);
}

TEST_CASE("upper bound check: odd and fractional powers on the synthetic table") {
    SyntheticPipe pipe;
    // |t(1-t)/2|^3 integrates to 1/1120 per unit interval.
    auto odd = upper_bound_check(3, 100, pipe.table, pipe.constants);
    CHECK(abs(odd.measured - Real(100) / 1120) < Real("1e-25"));
    CHECK(odd.exact);

    // A = 2.5: per-interval value int_0^1 (t(1-t)/2)^{5/2} dt
    //        = 2^{-5/2} Gamma(7/2)^2 / Gamma(7) = 5 pi / (1024 * 2^{5/2}).
    auto frac = upper_bound_check(2.5, 100, pipe.table, pipe.constants);
    Real pi = pi_value();
    Real expect = 100 * 5 * pi / (1024 * pow(Real(2), Real(5) / 2));
    CHECK_FALSE(frac.exact);
    CHECK(abs(frac.measured - expect) / expect < Real("1e-6"));
}

TEST_CASE("r2 mean square decays in y") {
    const auto& t = small_table();
    const auto& c = small_constants();
    auto rep = r2_mean_square(1000, 64, 2000, t, c);
    REQUIRE(rep.points.size() == 3); // y = 16, 32, 64
    CHECK(to_double(rep.slope) < 0);
    for (const auto& pt : rep.points)
        CHECK(to_double(pt.scale_ratio) < 10.0);
    CHECK(rep.tail_route_check < rep.points.front().mean_square);
    CHECK_THROWS_AS(r2_mean_square(1000, 64, 50, t, c), ValidationError);
}

TEST_CASE("mixed moment stays below its three-term bound") {
    const auto& t = small_table();
    const auto& c = small_constants();
    auto rep = mixed_moment(3, 1000, 64, t, c);
    CHECK(to_double(rep.ratio) < 10.0);
    CHECK(rep.identity_gap < Real("1e-20"));
    CHECK(rep.samples > 16);

    auto rep_small_y = mixed_moment(3, 1000, 16, t, c);
    CHECK(rep_small_y.bound_tail > rep.bound_tail); // y^{-3/4} term decreases
}

} // TEST_SUITE
