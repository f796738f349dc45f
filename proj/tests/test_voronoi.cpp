#include <doctest.h>

#include "rslab/errors.hpp"
#include "rslab/voronoi.hpp"

#include "support/fixtures.hpp"

using namespace rslab;
using rslab::testing::small_constants;
using rslab::testing::small_table;

TEST_SUITE("voronoi") {

TEST_CASE("single-term sum matches the closed form") {
    const auto& t = small_table();
    Real x(100);
    Real pi = pi_value();
    Real expect = pow(x, Real(9) / 8) / (4 * pi * pi) * cos(8 * pi * quartic_root(x) - pi / 4);
    CHECK(abs(r1(x, 1, t) - expect) < Real("1e-35"));
}

TEST_CASE("x=16 makes the single-term phase exact: r1 = 4/pi^2") {
    const auto& t = small_table();
    Real pi = pi_value();
    Real expect = 4 / (pi * pi);
    CHECK(abs(r1(Real(16), 1, t) - expect) < Real("1e-35"));
}

TEST_CASE("consecutive truncations differ by exactly the last term") {
    const auto& t = small_table();
    Real x(300);
    Real pi = pi_value();
    std::size_t N = 5;
    Real term = pow(x, Real(9) / 8) / (4 * pi * pi) * t.cn(N) /
                pow(Real(N), Real(7) / 8) *
                cos(8 * pi * quartic_root(Real(N) * x) - pi / 4);
    CHECK(abs(r1(x, N, t) - r1(x, N - 1, t) - term) < Real("1e-30"));
}

TEST_CASE("doubled precision re-evaluation agrees to >= 20 digits") {
    const auto& t = small_table();
    Real base = r1(Real(3000), 1000, t);
    Real precise;
    {
        PrecisionGuard guard(80);
        auto t80 = build_rankin_table(rslab::testing::small_eigen());
        precise = r1(Real(3000), 1000, t80);
    }
    CHECK(abs(base - precise) < Real("1e-20") * (1 + abs(precise)));
}

TEST_CASE("triangle-inequality envelope holds") {
    const auto& t = small_table();
    VoronoiKernel kernel(t, 200);
    for (double x : {50.0, 500.0, 1999.5}) {
        Real rx(x);
        CHECK(abs(kernel.eval(rx)) <= kernel.envelope(rx));
    }
}

TEST_CASE("range guards") {
    const auto& t = small_table();
    CHECK_THROWS_AS(r1(Real("0.5"), 1, t), ValidationError);
    CHECK_THROWS_AS(VoronoiKernel(t, 0), ValidationError);
    CHECK_THROWS_AS(VoronoiKernel(t, t.nmax + 1), ValidationError);
}

TEST_CASE("truncation report: residual shrinks as N grows") {
    const auto& t = small_table();
    const auto& c = small_constants();
    auto rep_small = truncation_report(1000, 32, 60, t, c);
    auto rep_large = truncation_report(1000, 512, 60, t, c);
    CHECK(rep_small.samples == 60);
    CHECK(rep_large.median_residual < rep_small.median_residual);
    CHECK(rep_large.max_residual > 0);
    // Median residual at N = T stays below the main oscillation scale.
    auto rep_full = truncation_report(1000, 1000, 60, t, c);
    CHECK(rep_full.median_residual / pow(Real(1000), Real(9) / 8) < 1);
}

TEST_CASE("truncation report fit components are non-negative") {
    const auto& t = small_table();
    const auto& c = small_constants();
    auto rep = truncation_report(1200, 64, 80, t, c);
    CHECK(rep.coeff_smooth >= 0);
    CHECK(rep.coeff_tail >= 0);
    CHECK(rep.fitted_c > 0);
    CHECK(rep.rows.size() == rep.samples);
}

} // TEST_SUITE
