#pragma once

#include <string>
#include <utility>
#include <vector>

#include "omviz/magnitude.hpp"

namespace omviz {

/// Color in HSL space: hue in degrees [0,360), saturation and lightness in [0,1].
struct Hsl {
    double hue;
    double saturation;
    double lightness;

    bool operator==(const Hsl&) const = default;
};

/// Lowercase "#rrggbb" string; the only color serialization used in output
/// documents, so legend and plot-body colors stay byte-identical.
std::string to_hex(const Hsl& c);

/// Order-of-magnitude color scheme: one hue per exponent, a sequential
/// lightness ramp for the mantissa within each hue, and a saturation ramp
/// for the flat band colors.
struct OmcPalette {
    std::vector<double> hues;           // degrees, one per decade
    double tone_lightest = 0.85;
    double tone_darkest = 0.30;
    std::vector<double> saturation_ramp;  // strictly increasing, one per decade

    void validate() const;

    static OmcPalette default_palette();
    static OmcPalette from_json_text(const std::string& text);
    static OmcPalette from_json_file(const std::string& path);
};

/// Color for a decomposed value: hue picked by the exponent, lightness
/// interpolated from lightest (m=1) to darkest (m=10). Hue never changes
/// within a decade.
Hsl omc_color(const MagnitudeValue& mv, const OmcPalette& palette,
              const MagnitudeRange& range);

/// Flat fill color of one OMH decade band; saturation grows with the band's
/// magnitude.
Hsl omh_band_color(int band_index, const OmcPalette& palette);

/// Classic horizon graph band tone: one hue, saturation increasing with the
/// band index.
Hsl horizon_band_color(int band_index, int n_bands);

}  // namespace omviz
