#include <doctest.h>

#include "rslab/errors.hpp"
#include "rslab/mainterm.hpp"

#include "support/fixtures.hpp"

using namespace rslab;
using rslab::testing::constant_table;
using rslab::testing::small_constants;
using rslab::testing::small_table;

TEST_SUITE("mainterm") {

TEST_CASE("calibration recovers the exact constants of a synthetic table") {
    // With c_n = 1, D_1(x) = sum_{n<=x}(x-n) is exactly (1/2)x^2 - x/2 at
    // unit midpoints, so the fit must return C = 1, Z0 = -1/2.
    auto t = constant_table(4000, Real(1));
    CalibrationOptions opts;
    opts.subtract_voronoi = false;
    auto c = calibrate_constants(t, 2000, opts);
    CHECK(abs(c.C - 1) < Real("1e-25"));
    CHECK(abs(c.Z0 + Real(1) / 2) < Real("1e-20"));
}

TEST_CASE("calibration rejects out-of-range scales and honours overrides") {
    CHECK_THROWS_AS(calibrate_constants(small_table(), 500, {}), ValidationError);
    CHECK_THROWS_AS(calibrate_constants(small_table(), 3000, {}), ValidationError);

    CalibrationOptions opts;
    opts.has_override = true;
    opts.override_C = Real("0.5");
    opts.override_Z0 = Real("-0.25");
    auto c = calibrate_constants(small_table(), 2000, opts);
    CHECK(c.C == Real("0.5"));
    CHECK(c.method == "override");
}

TEST_CASE("voronoi subtraction changes the fitted C only slightly") {
    CalibrationOptions off;
    off.subtract_voronoi = false;
    off.points = 1000;
    auto c_off = calibrate_constants(small_table(), 2000, off);
    const auto& c_on = small_constants();
    CHECK(abs(c_on.C - c_off.C) / c_on.C < Real("0.02"));
    CHECK(c_on.C > 0);
}

TEST_CASE("recalibration on a disjoint range stays within 3x the estimate") {
    CalibrationOptions opts;
    opts.subtract_voronoi = true;
    opts.n_sub = 1000;
    opts.points = 1000;
    auto at_x = calibrate_constants(small_table(), 1000, opts);  // range [500, 1000]
    auto at_2x = calibrate_constants(small_table(), 2000, opts); // range [1000, 2000]
    Real est = at_x.est_error_C > at_2x.est_error_C ? at_x.est_error_C : at_2x.est_error_C;
    CHECK(abs(at_x.C - at_2x.C) < 3 * est);
}

TEST_CASE("delta1 is continuous across integers") {
    const auto& t = small_table();
    const auto& c = small_constants();
    for (std::size_t m : {97u, 500u, 1999u, 3501u}) {
        Real lo = delta1(Real(m) - Real("1e-9"), t, c);
        Real hi = delta1(Real(m) + Real("1e-9"), t, c);
        CHECK(abs(hi - lo) < Real("1e-6") * (1 + abs(hi)));
    }
}

TEST_CASE("delta1 equals its closed-form unit-interval quadratic") {
    const auto& t = small_table();
    const auto& c = small_constants();
    for (std::size_t m : {10u, 777u, 2500u}) {
        auto q = delta1_piece(m, t, c);
        for (double frac : {0.1, 0.5, 0.9}) {
            Real x = Real(m) + Real(frac);
            CHECK(abs(q.eval(x) - delta1(x, t, c)) < Real("1e-30") * (1 + abs(q.eval(x))));
        }
    }
}

TEST_CASE("delta0 on an empty prefix is -Cx") {
    const auto& t = small_table();
    const auto& c = small_constants();
    Real x("0.5");
    CHECK(delta0(x, t, c) == -c.C * x);
    CHECK_THROWS_AS(delta0(Real(-1), t, c), ValidationError);
    CHECK_THROWS_AS(delta1(Real(t.nmax + 1), t, c), ValidationError);
}

TEST_CASE("delta1 growth stays below the x^{6/5} envelope") {
    const auto& t = small_table();
    const auto& c = small_constants();
    Real worst(0);
    for (std::size_t m = 1000; m < 4000; m += 7) {
        Real x = Real(m) + Real("0.5");
        Real ratio = abs(delta1(x, t, c)) / pow(x, Real(6) / 5);
        if (ratio > worst)
            worst = ratio;
    }
    CHECK(to_double(worst) < 1.0);
}

TEST_CASE("delta1 oscillation averages out over a dyadic window") {
    const auto& t = small_table();
    const auto& c = small_constants();
    KahanSum acc;
    std::size_t count = 0;
    for (std::size_t m = 1500; m < 3000; ++m, ++count)
        acc.add(delta1(Real(m) + Real("0.5"), t, c));
    Real mean = acc.value() / Real(count);
    CHECK(abs(mean) < Real("0.1") * pow(Real(1500), Real(9) / 8));
}

TEST_CASE("lipschitz step |delta1(x+y)-delta1(x)| <= c0 x y") {
    const auto& t = small_table();
    const auto& c = small_constants();
    Real worst(0);
    for (std::size_t i = 0; i < 500; ++i) {
        double x = 1200 + 3.7 * static_cast<double>(i);
        double y = 0.05 + 0.9 * static_cast<double>(i % 10) / 10.0;
        Real rx(x), ry(y);
        Real ratio = abs(delta1(rx + ry, t, c) - delta1(rx, t, c)) / (rx * ry);
        if (ratio > worst)
            worst = ratio;
    }
    CHECK(to_double(worst) < 20.0);
}

TEST_CASE("constants JSON round trip") {
    MainTermConstants c = small_constants();
    c.table_hash = 0xdeadbeef12345678ull;
    auto text = constants_to_json(c, 40);
    auto back = constants_from_json(text);
    CHECK(abs(back.C - c.C) < Real("1e-38"));
    CHECK(abs(back.Z0 - c.Z0) < Real("1e-38"));
    CHECK(back.table_hash == c.table_hash);
    CHECK(back.method == c.method);
}

} // TEST_SUITE
