#include "omviz/datagen.hpp"

#include <cmath>
#include <stdexcept>

#include "omviz/rng.hpp"

namespace omviz {

namespace {

constexpr double kPi = 3.14159265358979323846;

/// One walk step: perturb the mantissa, carry across decade boundaries by
/// recomposing the raw value, reflect at the range edges.
double walk_step(double v, double delta, const MagnitudeRange& range) {
    const MagnitudeValue mv = decompose(v, range);
    double target = (mv.mantissa + delta) * std::pow(10.0, mv.exponent);
    const double lo = range.value_min();
    const double hi = range.value_max();
    while (target < lo || target > hi) {
        if (target < lo) {
            target = lo + (lo - target);
        } else {
            target = hi - (target - hi);
        }
    }
    return target;
}

}  // namespace

Series random_walk(std::uint64_t seed, int n, const MagnitudeRange& range) {
    if (!range.valid()) throw std::domain_error("random_walk: invalid magnitude range");
    if (n < 1) throw std::domain_error("random_walk: n must be >= 1");

    SplitMix64 rng(seed);
    Series s;
    s.seed = seed;
    s.range = range;
    s.kind = SeriesKind::walk;
    s.values.reserve(static_cast<std::size_t>(n));

    double v = rng.uniform(1000.0, 10000.0);
    const double lo = range.value_min();
    const double hi = range.value_max();
    if (v < lo) v = lo;
    if (v > hi) v = hi;
    s.values.push_back(v);
    for (int i = 1; i < n; ++i) {
        const double delta = rng.uniform(-2.0, 2.0);
        v = walk_step(v, delta, range);
        s.values.push_back(v);
    }
    return s;
}

Series trend_series(SeriesKind kind, std::uint64_t seed, int n,
                    const MagnitudeRange& range) {
    if (!range.valid()) throw std::domain_error("trend_series: invalid magnitude range");
    if (n < 1) throw std::domain_error("trend_series: n must be >= 1");
    if (kind == SeriesKind::walk) {
        throw std::invalid_argument("trend_series: kind must be a trend, not walk");
    }

    SplitMix64 rng(seed);
    Series s;
    s.seed = seed;
    s.range = range;
    s.kind = kind;
    s.values.reserve(static_cast<std::size_t>(n));

    const double lo = range.value_min();
    const double hi = range.value_max();

    switch (kind) {
        case SeriesKind::exponential: {
            // Equal runs of each exponent from e_min up to e_max.
            const int decades = range.decades();
            for (int t = 0; t < n; ++t) {
                int e = range.e_min + (t * decades) / n;
                if (e > range.e_max) e = range.e_max;
                const double m = rng.uniform(1.0, 10.0);
                s.values.push_back(compose(m, e));
            }
            break;
        }
        case SeriesKind::periodic: {
            const double mid = 0.5 * (range.e_min + range.e_max);
            const double amp = 0.5 * (range.e_max - range.e_min);
            const int period = 25;
            for (int t = 0; t < n; ++t) {
                int e = static_cast<int>(
                    std::lround(mid + amp * std::sin(2.0 * kPi * t / period)));
                if (e < range.e_min) e = range.e_min;
                if (e > range.e_max) e = range.e_max;
                const double m = rng.uniform(1.0, 10.0);
                s.values.push_back(compose(m, e));
            }
            break;
        }
        case SeriesKind::linear: {
            const double b = rng.uniform(2.0, 100.0);
            const double final_v = rng.uniform(0.2 * hi, hi * 0.999);
            const double a = n > 1 ? (final_v - b) / (n - 1) : 0.0;
            for (int t = 0; t < n; ++t) {
                const double jitter = 1.0 + 0.05 * (rng.next_double() - 0.5);
                double v = (a * t + b) * jitter;
                if (v < lo) v = lo;
                if (v > hi) v = hi;
                s.values.push_back(v);
            }
            break;
        }
        default:
            break;
    }
    return s;
}

}  // namespace omviz
