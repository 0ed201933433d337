#pragma once

#include <cstdint>

#include "omviz/series.hpp"

namespace omviz {

/// Constrained random walk: starts uniformly in [1000, 10000], then perturbs
/// the mantissa by uniform [-2, 2] per step with carry across decade
/// boundaries; steps that leave the range reflect back inside.
Series random_walk(std::uint64_t seed, int n = 100,
                   const MagnitudeRange& range = MagnitudeRange{0, 4});

/// Trend series: the exponent sequence follows a fixed per-kind template
/// while the mantissas are drawn randomly.
///   periodic    - exponent follows a discretized sinusoid, period 25 steps
///   linear      - values a*t + b with seeded a, b and small per-step jitter
///   exponential - exponent rises linearly over t in equal runs
Series trend_series(SeriesKind kind, std::uint64_t seed, int n = 100,
                    const MagnitudeRange& range = MagnitudeRange{0, 4});

}  // namespace omviz
