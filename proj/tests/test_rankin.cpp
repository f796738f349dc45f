#include <doctest.h>

#include "rslab/errors.hpp"
#include "rslab/fileio.hpp"
#include "rslab/rankin.hpp"

#include "support/fixtures.hpp"

#include <filesystem>

using namespace rslab;
using rslab::testing::small_eigen;
using rslab::testing::small_table;

TEST_SUITE("rankin") {

TEST_CASE("first coefficients") {
    const auto& t = small_table();
    CHECK(t.cn(1) == 1);
    // c_2 = a(2)^2 / 2^11 = 576/2048, exactly representable in binary.
    CHECK(t.cn(2) == Real(9) / 32);
    CHECK(to_double(t.cn(2)) == doctest::Approx(0.28125).epsilon(1e-15));
}

TEST_CASE("c_16 has the three-divisor structure") {
    const auto& eigen = small_eigen();
    BigInt numer = eigen.at(16) * eigen.at(16) + (BigInt(1) << 22) * eigen.at(4) * eigen.at(4) +
                   pow(BigInt(4), 22);
    Rational expect(numer, pow(BigInt(16), 11));
    CHECK(rankin_coeff_exact(eigen, 16) == expect);
    CHECK(abs(small_table().cn(16) - Real(expect)) < Real("1e-38"));
}

TEST_CASE("exact-rational oracle matches the table on n <= 1000") {
    const auto& eigen = small_eigen();
    const auto& t = small_table();
    for (std::size_t n = 1; n <= 1000; ++n) {
        Real exact = round_once(rankin_coeff_exact(eigen, n));
        CHECK(exact == t.cn(n));
    }
}

TEST_CASE("prefix sums increment by the coefficients") {
    const auto& t = small_table();
    for (std::size_t m = 1; m <= t.nmax; m += 173) {
        CHECK(abs(t.s0(m) - t.s0(m - 1) - t.cn(m)) < Real("1e-36") * (1 + t.s0(m)));
        CHECK(abs(t.s1(m) - t.s1(m - 1) - Real(m) * t.cn(m)) < Real("1e-36") * (1 + t.s1(m)));
    }
    CHECK(t.s0(10) > t.s0(9));
    CHECK(t.s1(10) > t.s1(9));
}

TEST_CASE("doubling the working precision moves prefix sums by < 1e-20 relative") {
    Real s0_base = small_table().s0(small_table().nmax);
    Real s1_base = small_table().s1(small_table().nmax);
    PrecisionGuard guard(80);
    auto precise = build_rankin_table(small_eigen());
    CHECK(abs(precise.s0(precise.nmax) - s0_base) / precise.s0(precise.nmax) < Real("1e-20"));
    CHECK(abs(precise.s1(precise.nmax) - s1_base) / precise.s1(precise.nmax) < Real("1e-20"));
}

TEST_CASE("mean-square growth stays essentially linear") {
    std::vector<std::size_t> grid;
    for (std::size_t x = 16; x <= small_table().nmax; x *= 2)
        grid.push_back(x);
    auto fit = mean_square_growth(small_table(), grid);
    CHECK(fit.theta_ok);
    CHECK(to_double(fit.theta) < 1.05);
    CHECK(to_double(fit.theta) > 0.5);

    // sum_{n<=2} c_n^2 = 1 + 0.28125^2
    auto fit2 = mean_square_growth(small_table(), {2, 4, 8});
    CHECK(to_double(fit2.points[0].sum_sq) == doctest::Approx(1.0791015625).epsilon(1e-12));
}

TEST_CASE("short-interval means stay bounded") {
    const auto& t = small_table();
    CHECK(to_double(short_sum_check(t, 1, 1)) == doctest::Approx(0.28125));
    CHECK(to_double(short_sum_check(t, 0, 1)) == doctest::Approx(1.0));
    // Deterministic window sweep in lieu of random probes.
    double worst = 0;
    for (std::size_t i = 0; i < 200; ++i) {
        double x = 500 + 17.0 * static_cast<double>(i);
        double y = 10 + static_cast<double>(i % 50);
        worst = std::max(worst, to_double(short_sum_check(t, x, y)));
    }
    CHECK(worst < 10.0);
    CHECK_THROWS_AS(short_sum_check(t, -1, 1), ValidationError);
    CHECK_THROWS_AS(short_sum_check(t, 1, 0.5), ValidationError);
}

TEST_CASE("cache round trip and stale-source rejection") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "rslab_ctable_cache_test";
    fs::create_directories(dir);
    std::string path = (dir / "ctable.txt").string();

    write_rankin_cache(path, small_table(), 0xabcdefull);
    auto loaded = read_rankin_cache(path, 0xabcdefull);
    REQUIRE(loaded.nmax == small_table().nmax);
    for (std::size_t n = 1; n <= loaded.nmax; n += 97)
        CHECK(abs(loaded.cn(n) - small_table().cn(n)) < Real("1e-38"));

    CHECK_THROWS_AS(read_rankin_cache(path, 0x12345ull), ValidationError);
    fs::remove_all(dir);
}

} // TEST_SUITE
