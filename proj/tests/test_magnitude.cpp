#include <doctest.h>

#include <cmath>

#include "omviz/magnitude.hpp"
#include "omviz/rng.hpp"

using namespace omviz;

namespace {
const MagnitudeRange kStudyRange{0, 4};
}

TEST_CASE("decompose splits mantissa and exponent") {
    auto mv = decompose(250.0);
    CHECK(mv.mantissa == doctest::Approx(2.5).epsilon(1e-12));
    CHECK(mv.exponent == 2);

    mv = decompose(1.0);
    CHECK(mv.mantissa == doctest::Approx(1.0));
    CHECK(mv.exponent == 0);

    mv = decompose(99999.0);
    CHECK(mv.mantissa == doctest::Approx(9.9999).epsilon(1e-12));
    CHECK(mv.exponent == 4);
}

TEST_CASE("decompose rejects non-positive and non-finite input") {
    CHECK_THROWS_AS(decompose(0.0), std::domain_error);
    CHECK_THROWS_AS(decompose(-3.0), std::domain_error);
    CHECK_THROWS_AS(decompose(std::nan("")), std::domain_error);
    CHECK_THROWS_AS(decompose(INFINITY), std::domain_error);
}

TEST_CASE("decompose snaps decade boundaries") {
    // 1000 computed through a lossy route still lands on (1, 3).
    const double v = std::pow(10.0, 3.0) * (1.0 + 1e-13);
    const auto mv = decompose(v);
    CHECK(mv.exponent == 3);
    CHECK(mv.mantissa >= 1.0);
}

TEST_CASE("compose is the inverse of decompose") {
    CHECK(compose(2.5, 2) == doctest::Approx(250.0));
    CHECK(compose(1.0, 0) == doctest::Approx(1.0));
    CHECK(compose(10.0, 3) == doctest::Approx(10000.0));  // boundary alias of (1, 4)
    CHECK_THROWS_AS(compose(0.5, 2), std::domain_error);
    CHECK_THROWS_AS(compose(11.0, 2), std::domain_error);
}

TEST_CASE("round trip over random values") {
    SplitMix64 rng(42);
    for (int i = 0; i < 1000000; ++i) {
        const double v = rng.uniform(1.0, 100000.0);
        const auto mv = decompose(v);
        CHECK(mv.mantissa >= 1.0);
        CHECK(mv.mantissa < 10.0);
        const double back = compose(mv.mantissa, mv.exponent);
        REQUIRE(std::fabs(back - v) <= 1e-12 * v);
    }
}

TEST_CASE("piecewise_y endpoints and interior value") {
    CHECK(piecewise_y(1.0, kStudyRange) == doctest::Approx(0.0));
    CHECK(piecewise_y(100000.0, kStudyRange) == doctest::Approx(1.0));
    // 5000 = (m=5, e=3): (3 + 4/9) / 5 = 31/45
    CHECK(piecewise_y(5000.0, kStudyRange) == doctest::Approx(31.0 / 45.0).epsilon(1e-12));
    CHECK_THROWS_AS(piecewise_y(0.5, kStudyRange), std::out_of_range);
    CHECK_THROWS_AS(piecewise_y(2e5, kStudyRange), std::out_of_range);
}

TEST_CASE("log_y endpoints and interior value") {
    CHECK(log_y(1.0, kStudyRange) == doctest::Approx(0.0));
    CHECK(log_y(1000.0, kStudyRange) == doctest::Approx(0.6));
    CHECK(log_y(50000.0, kStudyRange) ==
          doctest::Approx(std::log10(50000.0) / 5.0).epsilon(1e-12));
    CHECK_THROWS_AS(log_y(0.5, kStudyRange), std::out_of_range);
}

TEST_CASE("both scales are strictly monotone") {
    SplitMix64 rng(7);
    for (int i = 0; i < 20000; ++i) {
        double a = rng.uniform(1.0, 100000.0);
        double b = rng.uniform(1.0, 100000.0);
        if (a == b) continue;
        if (a > b) std::swap(a, b);
        REQUIRE(piecewise_y(a, kStudyRange) < piecewise_y(b, kStudyRange));
        REQUIRE(log_y(a, kStudyRange) < log_y(b, kStudyRange));
    }
}

TEST_CASE("piecewise scale is continuous across decade boundaries") {
    for (int k = 1; k <= 4; ++k) {
        const double boundary = std::pow(10.0, k);
        const double below = boundary * (1.0 - 1e-11);
        CHECK(std::fabs(piecewise_y(below, kStudyRange) -
                        piecewise_y(boundary, kStudyRange)) < 1e-10);
    }
}

TEST_CASE("scales agree exactly at decade boundaries") {
    for (int k = 0; k <= 5; ++k) {
        const double boundary = std::pow(10.0, k);
        CHECK(piecewise_y(boundary, kStudyRange) == log_y(boundary, kStudyRange));
    }
}

TEST_CASE("single-decade range") {
    const MagnitudeRange r{0, 0};
    CHECK(r.decades() == 1);
    CHECK(piecewise_y(1.0, r) == doctest::Approx(0.0));
    CHECK(piecewise_y(10.0, r) == doctest::Approx(1.0));
    CHECK(piecewise_y(5.0, r) == doctest::Approx(4.0 / 9.0));
}
