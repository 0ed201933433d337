#include <doctest.h>

#include <cmath>
#include <vector>

#include "omviz/datagen.hpp"
#include "omviz/magnitude.hpp"

using namespace omviz;

namespace {

struct LinearFit {
    double slope, intercept, r2;
};

// Test-side least-squares oracle.
LinearFit fit_line(const std::vector<double>& ys) {
    const double n = static_cast<double>(ys.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < ys.size(); ++i) {
        const double x = static_cast<double>(i);
        sx += x;
        sy += ys[i];
        sxx += x * x;
        sxy += x * ys[i];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double intercept = (sy - slope * sx) / n;
    double ss_res = 0, ss_tot = 0;
    const double mean = sy / n;
    for (std::size_t i = 0; i < ys.size(); ++i) {
        const double pred = slope * static_cast<double>(i) + intercept;
        ss_res += (ys[i] - pred) * (ys[i] - pred);
        ss_tot += (ys[i] - mean) * (ys[i] - mean);
    }
    return {slope, intercept, ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0};
}

SeriesKind classify_trend(const std::vector<double>& values) {
    std::vector<double> logs(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) logs[i] = std::log10(values[i]);
    const double r2_lin = fit_line(values).r2;
    const double r2_exp = fit_line(logs).r2;
    if (r2_lin < 0.5 && r2_exp < 0.5) return SeriesKind::periodic;
    return r2_lin >= r2_exp ? SeriesKind::linear : SeriesKind::exponential;
}

}  // namespace

TEST_CASE("random walk basic constraints") {
    const Series s = random_walk(123);
    CHECK(s.size() == 100);
    CHECK(s.values.front() >= 1000.0);
    CHECK(s.values.front() <= 10000.0);
    for (double v : s.values) {
        CHECK(v >= 1.0);
        CHECK(v <= 100000.0);
    }
}

TEST_CASE("random walk determinism and seed separation") {
    const Series a = random_walk(99);
    const Series b = random_walk(99);
    const Series c = random_walk(100);
    CHECK(a.values == b.values);
    CHECK(a.values != c.values);
}

TEST_CASE("random walk stays inside the range over a long run") {
    const MagnitudeRange range{0, 4};
    const Series s = random_walk(5, 1000000, range);
    for (double v : s.values) {
        REQUIRE(v >= range.value_min());
        REQUIRE(v <= range.value_max());
    }
}

TEST_CASE("random walk rejects bad arguments") {
    CHECK_THROWS_AS(random_walk(1, 0), std::domain_error);
    CHECK_THROWS_AS(random_walk(1, 100, MagnitudeRange{3, 1}), std::domain_error);
}

TEST_CASE("exponential trend covers the range in nondecreasing runs") {
    const Series s = trend_series(SeriesKind::exponential, 17);
    int prev_e = -1;
    int min_e = 99, max_e = -99;
    for (double v : s.values) {
        const int e = decompose(v, s.range).exponent;
        REQUIRE(e >= prev_e);
        prev_e = e;
        min_e = std::min(min_e, e);
        max_e = std::max(max_e, e);
    }
    CHECK(min_e == 0);
    CHECK(max_e == 4);
    // roughly equal runs of each exponent
    for (int e = 0; e <= 4; ++e) {
        int count = 0;
        for (double v : s.values) {
            if (decompose(v, s.range).exponent == e) ++count;
        }
        CHECK(count == 20);
    }
}

TEST_CASE("periodic trend repeats its exponent template every cycle") {
    const Series s = trend_series(SeriesKind::periodic, 23);
    const int period = 25;
    std::vector<int> exponents;
    for (double v : s.values) exponents.push_back(decompose(v, s.range).exponent);
    for (std::size_t t = 0; t + period < exponents.size(); ++t) {
        REQUIRE(exponents[t] == exponents[t + period]);
    }
    CHECK(s.size() / period >= 2);  // at least two full cycles
}

TEST_CASE("linear trend fits a line better than an exponential") {
    const Series s = trend_series(SeriesKind::linear, 31);
    std::vector<double> logs;
    for (double v : s.values) logs.push_back(std::log10(v));
    CHECK(fit_line(s.values).r2 > fit_line(logs).r2);
}

TEST_CASE("trend kind is recoverable from generated data") {
    const SeriesKind kinds[] = {SeriesKind::periodic, SeriesKind::linear,
                                SeriesKind::exponential};
    int hits = 0, total = 0;
    for (SeriesKind kind : kinds) {
        for (std::uint64_t seed = 1; seed <= 200; ++seed) {
            const Series s = trend_series(kind, seed);
            if (classify_trend(s.values) == kind) ++hits;
            ++total;
        }
    }
    CHECK(static_cast<double>(hits) / total >= 0.95);
}

TEST_CASE("trend generators are deterministic and validate kind") {
    CHECK(trend_series(SeriesKind::linear, 8).values ==
          trend_series(SeriesKind::linear, 8).values);
    CHECK_THROWS_AS(trend_series(SeriesKind::walk, 8), std::invalid_argument);
}

TEST_CASE("trend values stay inside the range") {
    for (SeriesKind kind :
         {SeriesKind::periodic, SeriesKind::linear, SeriesKind::exponential}) {
        for (std::uint64_t seed = 1; seed <= 50; ++seed) {
            const Series s = trend_series(kind, seed);
            for (double v : s.values) {
                REQUIRE(v >= 1.0);
                REQUIRE(v <= 100000.0);
            }
        }
    }
}
