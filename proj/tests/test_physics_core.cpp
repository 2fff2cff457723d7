#include <catch2/catch_amalgamated.hpp>

#include "casimir/constants.hpp"
#include "casimir/matsubara.hpp"

using namespace casimir;

namespace {
double rel_err(double got, double want) {
    return std::fabs(got / want - 1.0);
}
}  // namespace

TEST_CASE("physical constants are the CODATA values", "[core]") {
    REQUIRE(constants.hbar == 1.054571817e-34);
    REQUIRE(constants.k_boltzmann == 1.380649e-23);
    REQUIRE(constants.c == 2.99792458e8);
}

TEST_CASE("matsubara frequencies match the reference captions", "[core]") {
    // first nonvanishing Matsubara frequency at the three tabulated
    // temperatures, quoted to 4 significant digits
    CHECK(rel_err(matsubara_frequency(1, 1.0), 8.226e11) < 5e-4);
    CHECK(rel_err(matsubara_frequency(1, 300.0), 2.468e14) < 5e-4);
    CHECK(rel_err(matsubara_frequency(1, 350.0), 2.879e14) < 5e-4);
}

TEST_CASE("matsubara frequency basics", "[core]") {
    CHECK(matsubara_frequency(0, 300.0) == 0.0);
    CHECK_THROWS_AS(matsubara_frequency(-1, 300.0), std::invalid_argument);
    CHECK_THROWS_AS(matsubara_frequency(1, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(matsubara_frequency(1, -5.0), std::invalid_argument);

    SECTION("integer scaling is exact") {
        const double z1 = matsubara_frequency(1, 217.0);
        for (int m : {2, 3, 17, 25674})
            CHECK(matsubara_frequency(m, 217.0) == m * z1);
    }
    SECTION("linear in T to machine precision") {
        for (int m : {1, 5, 100})
            CHECK(matsubara_frequency(m, 2 * 73.0) ==
                  2.0 * matsubara_frequency(m, 73.0));
    }
    SECTION("strictly increasing in m") {
        double prev = 0.0;
        for (int m = 1; m < 50; ++m) {
            const double z = matsubara_frequency(m, 42.0);
            CHECK(z > prev);
            prev = z;
        }
    }
}

TEST_CASE("dimensionless frequency q_m", "[core]") {
    const GapConfig gap160_1K{160e-9, 1.0};
    CHECK(dimensionless_frequency(0, gap160_1K) == 0.0);
    // 8.226e11 * 160 nm / c
    CHECK(rel_err(dimensionless_frequency(1, gap160_1K), 4.39021986e-4) < 1e-8);

    // m = 86 at (160 nm, 300 K) sits near the top of the room-temperature
    // sum; cross-checks the highest-frequency column of the reference grid
    const GapConfig gap160_300K{160e-9, 300.0};
    CHECK(rel_err(dimensionless_frequency(86, gap160_300K), 11.3256) < 1e-3);
    CHECK(rel_err(matsubara_frequency(86, 300.0), 2.122e16) < 5e-4);
}

TEST_CASE("gap validation", "[core]") {
    CHECK_THROWS_AS((GapConfig{0.0, 300.0}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((GapConfig{-1e-6, 300.0}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((GapConfig{1e-6, 0.0}.validate()), std::invalid_argument);
    CHECK_NOTHROW((GapConfig{1e-6, 300.0}.validate()));
    CHECK_THROWS_AS(dimensionless_frequency(1, GapConfig{-1.0, 300.0}),
                    std::invalid_argument);
}
