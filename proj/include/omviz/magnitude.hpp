#pragma once

#include <cmath>
#include <stdexcept>

namespace omviz {

/// A positive value split into scientific-notation parts: value = mantissa * 10^exponent.
/// Canonical form keeps mantissa in [1,10); the top of a MagnitudeRange may be
/// represented as mantissa 10 so scales close on a full interval.
struct MagnitudeValue {
    double value;
    double mantissa;
    int exponent;
};

/// A contiguous run of base-10 orders of magnitude, covering [10^e_min, 10^(e_max+1)].
struct MagnitudeRange {
    int e_min = 0;
    int e_max = 4;

    int decades() const { return e_max - e_min + 1; }
    double value_min() const { return std::pow(10.0, e_min); }
    double value_max() const { return std::pow(10.0, e_max + 1); }
    bool contains(double v) const;
    bool valid() const { return e_min <= e_max; }
};

/// Split a positive finite value into mantissa and exponent.
/// Exponents are snapped to the nearest integer when log10(v) is within 1e-9
/// of it, so values sitting on decade boundaries decompose exactly.
MagnitudeValue decompose(double v);

/// Range-aware decomposition: the exact top of the range comes back as
/// (mantissa=10, exponent=e_max) instead of (1, e_max+1).
MagnitudeValue decompose(double v, const MagnitudeRange& range);

/// Inverse of decompose. Requires 1 <= mantissa <= 10.
double compose(double mantissa, int exponent);

/// Piecewise y scale: linear in the mantissa within each decade, decades
/// stacked uniformly. Maps [10^e_min, 10^(e_max+1)] onto [0,1].
double piecewise_y(double v, const MagnitudeRange& range);

/// Plain logarithmic y scale onto [0,1] over the same interval.
double log_y(double v, const MagnitudeRange& range);

}  // namespace omviz
