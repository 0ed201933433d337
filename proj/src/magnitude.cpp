#include "omviz/magnitude.hpp"

#include <algorithm>
#include <limits>

namespace omviz {

namespace {
constexpr double kBoundarySnapTol = 1e-9;
constexpr double kRangeRelTol = 1e-9;
}  // namespace

bool MagnitudeRange::contains(double v) const {
    if (!std::isfinite(v) || v <= 0.0) return false;
    return v >= value_min() * (1.0 - kRangeRelTol) &&
           v <= value_max() * (1.0 + kRangeRelTol);
}

MagnitudeValue decompose(double v) {
    if (!std::isfinite(v) || v <= 0.0) {
        throw std::domain_error("decompose: value must be positive and finite");
    }
    const double lg = std::log10(v);
    const double rounded = std::round(lg);
    int e;
    if (std::fabs(lg - rounded) < kBoundarySnapTol) {
        e = static_cast<int>(rounded);
    } else {
        e = static_cast<int>(std::floor(lg));
    }
    double m = v / std::pow(10.0, e);
    // Guard against residual drift after division.
    if (m < 1.0) {
        m = 1.0;
    } else if (m >= 10.0) {
        m /= 10.0;
        ++e;
    }
    return MagnitudeValue{v, m, e};
}

MagnitudeValue decompose(double v, const MagnitudeRange& range) {
    MagnitudeValue mv = decompose(v);
    if (mv.exponent > range.e_max) {
        // Exact range top: close the scale at mantissa 10.
        mv.exponent = range.e_max;
        mv.mantissa = v / std::pow(10.0, mv.exponent);
    }
    return mv;
}

double compose(double mantissa, int exponent) {
    if (!(mantissa >= 1.0 && mantissa <= 10.0)) {
        throw std::domain_error("compose: mantissa must lie in [1,10]");
    }
    return mantissa * std::pow(10.0, exponent);
}

double piecewise_y(double v, const MagnitudeRange& range) {
    if (!range.contains(v)) {
        throw std::out_of_range("piecewise_y: value outside magnitude range");
    }
    const MagnitudeValue mv = decompose(v, range);
    const double y =
        (static_cast<double>(mv.exponent - range.e_min) + (mv.mantissa - 1.0) / 9.0) /
        static_cast<double>(range.decades());
    return std::clamp(y, 0.0, 1.0);
}

double log_y(double v, const MagnitudeRange& range) {
    if (!range.contains(v)) {
        throw std::out_of_range("log_y: value outside magnitude range");
    }
    double lg = std::log10(v);
    const double rounded = std::round(lg);
    if (std::fabs(lg - rounded) < kBoundarySnapTol) lg = rounded;
    const double y = (lg - range.e_min) / static_cast<double>(range.decades());
    return std::clamp(y, 0.0, 1.0);
}

}  // namespace omviz
