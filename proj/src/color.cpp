#include "omviz/color.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace omviz {

namespace {

double hue_to_rgb_channel(double p, double q, double t) {
    if (t < 0.0) t += 1.0;
    if (t > 1.0) t -= 1.0;
    if (t < 1.0 / 6.0) return p + (q - p) * 6.0 * t;
    if (t < 1.0 / 2.0) return q;
    if (t < 2.0 / 3.0) return p + (q - p) * (2.0 / 3.0 - t) * 6.0;
    return p;
}

int to_byte(double channel) {
    int b = static_cast<int>(std::lround(channel * 255.0));
    return std::min(255, std::max(0, b));
}

}  // namespace

std::string to_hex(const Hsl& c) {
    const double h = c.hue / 360.0;
    const double s = c.saturation;
    const double l = c.lightness;
    double r, g, b;
    if (s <= 0.0) {
        r = g = b = l;
    } else {
        const double q = l < 0.5 ? l * (1.0 + s) : l + s - l * s;
        const double p = 2.0 * l - q;
        r = hue_to_rgb_channel(p, q, h + 1.0 / 3.0);
        g = hue_to_rgb_channel(p, q, h);
        b = hue_to_rgb_channel(p, q, h - 1.0 / 3.0);
    }
    char buf[8];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", to_byte(r), to_byte(g), to_byte(b));
    return std::string(buf);
}

void OmcPalette::validate() const {
    if (hues.empty()) throw std::invalid_argument("palette: hue list empty");
    for (std::size_t i = 0; i < hues.size(); ++i) {
        for (std::size_t j = i + 1; j < hues.size(); ++j) {
            if (hues[i] == hues[j]) {
                throw std::invalid_argument("palette: hues must be pairwise distinct");
            }
        }
    }
    if (saturation_ramp.size() != hues.size()) {
        throw std::invalid_argument("palette: saturation ramp size must match hue list");
    }
    for (std::size_t i = 1; i < saturation_ramp.size(); ++i) {
        if (saturation_ramp[i] <= saturation_ramp[i - 1]) {
            throw std::invalid_argument("palette: saturation ramp must be strictly increasing");
        }
    }
    for (double s : saturation_ramp) {
        if (s < 0.0 || s > 1.0) throw std::invalid_argument("palette: saturation outside [0,1]");
    }
    if (!(tone_lightest > tone_darkest)) {
        throw std::invalid_argument("palette: tone range must go from lighter to darker");
    }
    if (tone_lightest > 1.0 || tone_darkest < 0.0) {
        throw std::invalid_argument("palette: tone range outside [0,1]");
    }
}

OmcPalette OmcPalette::default_palette() {
    OmcPalette p;
    // Five hues spread around the wheel, skipping the red/green pairing.
    p.hues = {210.0, 275.0, 340.0, 45.0, 110.0};
    p.tone_lightest = 0.85;
    p.tone_darkest = 0.30;
    p.saturation_ramp = {0.35, 0.48, 0.60, 0.72, 0.85};
    p.validate();
    return p;
}

OmcPalette OmcPalette::from_json_text(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    OmcPalette p;
    p.hues = j.at("hues").get<std::vector<double>>();
    const auto tone = j.at("tone_range").get<std::vector<double>>();
    if (tone.size() != 2) throw std::invalid_argument("palette: tone_range needs two entries");
    p.tone_lightest = tone[0];
    p.tone_darkest = tone[1];
    p.saturation_ramp = j.at("saturation_ramp").get<std::vector<double>>();
    p.validate();
    return p;
}

OmcPalette OmcPalette::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("palette: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str());
}

Hsl omc_color(const MagnitudeValue& mv, const OmcPalette& palette,
              const MagnitudeRange& range) {
    const int band = mv.exponent - range.e_min;
    if (band < 0 || band >= static_cast<int>(palette.hues.size()) ||
        mv.exponent > range.e_max) {
        throw std::out_of_range("omc_color: exponent outside palette range");
    }
    const double t = (mv.mantissa - 1.0) / 9.0;
    return Hsl{palette.hues[band], palette.saturation_ramp[band],
               palette.tone_lightest + (palette.tone_darkest - palette.tone_lightest) * t};
}

Hsl omh_band_color(int band_index, const OmcPalette& palette) {
    if (band_index < 0 || band_index >= static_cast<int>(palette.hues.size())) {
        throw std::out_of_range("omh_band_color: band index outside palette");
    }
    const double mid = 0.5 * (palette.tone_lightest + palette.tone_darkest);
    return Hsl{palette.hues[band_index], palette.saturation_ramp[band_index], mid};
}

Hsl horizon_band_color(int band_index, int n_bands) {
    if (n_bands < 1 || band_index < 0 || band_index >= n_bands) {
        throw std::out_of_range("horizon_band_color: band index out of range");
    }
    const double t = static_cast<double>(band_index + 1) / static_cast<double>(n_bands);
    return Hsl{215.0, 0.30 + 0.60 * t, 0.85 - 0.45 * t};
}

}  // namespace omviz
