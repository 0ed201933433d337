#pragma once

#include <string>
#include <vector>

#include "omviz/color.hpp"
#include "omviz/magnitude.hpp"
#include "omviz/series.hpp"

namespace omviz {

enum class Design { log_line, oml, horizon, omh, ssb };

std::string to_string(Design d);
Design design_from_string(const std::string& name);

/// A highlighted data point: a letter drawn above the chart plus two short
/// vertical strokes at the top and bottom of the plot area.
struct Marker {
    char label;
    int index;
};

struct ChartSpec {
    Design design = Design::log_line;
    int width_px = 972;
    int height_px = 350;
    std::vector<Marker> markers;
    bool show_legend = true;
    int n_bands = 3;  // classic horizon only
    MagnitudeRange range{0, 4};
};

/// Deterministic SVG 1.1 document; layers are named <g> groups
/// (grid, data/bands, markers, legend).
struct RenderedChart {
    std::string document;
};

/// Gridline position in the design's unit scale coordinate.
/// log_line/oml: full-chart positions, majors at decade boundaries and one
/// reduced-opacity minor per decade at mantissa 5. omh: band-local positions
/// shared by every decade through layering. ssb: sub-plot-local positions.
/// horizon: row bounds only; its value gridlines depend on the series maximum
/// and are computed at render time.
struct GridLine {
    double y;
    bool major;
};
std::vector<GridLine> grid_positions(const MagnitudeRange& range, Design design);

/// OMH band fill fractions for one value: bands below the exponent full,
/// the value's own band at (m-1)/9, bands above empty.
std::vector<double> omh_band_fractions(double v, const MagnitudeRange& range);

/// Classic horizon fractions: band i holds clamp((v - i*h)/h, 0, 1) with
/// h = top/n_bands.
std::vector<double> horizon_band_fractions(double v, double top, int n_bands);

/// Scale-stack fractions, one entry per sub-plot from smallest scale up;
/// a negative entry means the value exceeds that scale and is not drawn.
std::vector<double> ssb_scale_fractions(double v, const MagnitudeRange& range);

RenderedChart render(const Series& series, const ChartSpec& spec,
                     const OmcPalette& palette);

}  // namespace omviz
