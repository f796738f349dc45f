#include <doctest.h>

#include "rslab/arith.hpp"
#include "rslab/eigenform.hpp"
#include "rslab/errors.hpp"
#include "rslab/fileio.hpp"

#include "support/eta_oracle.hpp"
#include "support/fixtures.hpp"

#include <filesystem>

using namespace rslab;
using rslab::testing::small_eigen;

TEST_SUITE("eigenform") {

TEST_CASE("normalization and first coefficients against the eta-product oracle") {
    auto oracle = testing::eta_product_tau(64);
    const auto& table = small_eigen();
    CHECK(table.at(1) == 1);
    CHECK(oracle[1] == 1);
    CHECK(oracle[2] == -24);
    CHECK(table.at(2) == -24);
    for (std::size_t n = 1; n <= 64; ++n)
        CHECK(table.at(n) == oracle[n]);
}

TEST_CASE("multiplicativity at (2,3)") {
    const auto& table = small_eigen();
    CHECK(table.at(6) == table.at(2) * table.at(3));
}

TEST_CASE("prime-power recursion at p=2, j=1") {
    const auto& table = small_eigen();
    CHECK(table.at(4) == table.at(2) * table.at(2) - BigInt(2048));
}

TEST_CASE("reference and modular methods build identical tables") {
    const auto& ref = small_eigen();
    auto mod = build_eigenform_table(testing::kFixtureNmax, TauMethod::modular);
    REQUIRE(mod.nmax == ref.nmax);
    for (std::size_t n = 1; n <= ref.nmax; ++n)
        CHECK(mod.at(n) == ref.at(n));
}

TEST_CASE("full relation scan is clean") {
    auto report = verify_hecke_relations(small_eigen(), 1000);
    CHECK(report.ok());
    CHECK(report.multiplicative_checked > 0);
    CHECK(report.prime_power_checked > 0);
    CHECK(report.deligne_checked == 1000);
}

TEST_CASE("relation scan flags a corrupted entry") {
    EigenformTable bad = small_eigen();
    bad.nmax = 100;
    bad.a.resize(101);
    bad.a[6] += 1;
    auto report = verify_hecke_relations(bad);
    CHECK_FALSE(report.ok());
}

TEST_CASE("mod-691 congruence") {
    // sigma_11(2) = 1 + 2^11 = 2049 and -24 = 2049 - 3*691.
    CHECK((2049 - (-24)) % 691 == 0);
    auto report = congruence_check(small_eigen());
    CHECK(report.ok());
    CHECK(report.checked == testing::kFixtureNmax);

    EigenformTable bad = small_eigen();
    bad.nmax = 50;
    bad.a.resize(51);
    bad.a[7] += 1;
    CHECK_THROWS_AS(congruence_check(bad), InternalError);
}

TEST_CASE("reference guard rejects large nmax") {
    CHECK_THROWS_AS(build_eigenform_table(10001, TauMethod::reference), ValidationError);
    CHECK_THROWS_AS(build_eigenform_table(0, TauMethod::modular), ValidationError);
}

TEST_CASE("tiny tables") {
    auto t1 = build_eigenform_table(1, TauMethod::modular);
    CHECK(t1.at(1) == 1);
    auto t2 = build_eigenform_table(2, TauMethod::reference);
    CHECK(t2.at(2) == -24);
}

TEST_CASE("cache round trip and validation") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "rslab_eigen_cache_test";
    fs::create_directories(dir);
    std::string path = (dir / "eigenform.txt").string();

    auto table = build_eigenform_table(200, TauMethod::reference);
    write_eigenform_cache(path, table);
    auto loaded = read_eigenform_cache(path);
    REQUIRE(loaded.nmax == 200);
    for (std::size_t n = 1; n <= 200; ++n)
        CHECK(loaded.at(n) == table.at(n));

    atomic_write_text(path, "wrong header\n");
    CHECK_THROWS_AS(read_eigenform_cache(path), ValidationError);
    fs::remove_all(dir);
}

TEST_CASE("deligne bound is exact-checked across the table") {
    const auto& table = small_eigen();
    auto d = divisor_count_sieve(table.nmax);
    for (std::size_t n = 1; n <= table.nmax; n += 37) {
        BigInt lhs = table.at(n) * table.at(n);
        BigInt rhs = pow(BigInt(n), 11) * d[n] * d[n];
        CHECK(lhs <= rhs);
    }
}

} // TEST_SUITE
