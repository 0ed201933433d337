#include "omviz/chart.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <stdexcept>

namespace omviz {

namespace {

constexpr double kLog10Of5 = 0.69897000433601880479;

std::string strf(const char* fmt, ...) {
    va_list ap;
    va_start(ap, fmt);
    va_list ap2;
    va_copy(ap2, ap);
    const int needed = std::vsnprintf(nullptr, 0, fmt, ap);
    va_end(ap);
    std::string buf(static_cast<std::size_t>(needed), '\0');
    std::vsnprintf(buf.data(), buf.size() + 1, fmt, ap2);
    va_end(ap2);
    return buf;
}

/// Fixed two-decimal coordinate formatting keeps documents byte-stable.
std::string num(double x) {
    if (std::fabs(x) < 5e-3) x = 0.0;  // avoid "-0.00"
    return strf("%.2f", x);
}

std::string value_label(double v) { return strf("%g", v); }

struct PlotFrame {
    double x0, y0, w, h;  // plot area in pixels, y0 = top edge

    double x_at(std::size_t i, std::size_t n) const {
        if (n <= 1) return x0 + w / 2.0;
        return x0 + w * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    double y_at_unit(double unit) const { return y0 + h * (1.0 - unit); }
};

bool has_legend(Design d) {
    return d == Design::oml || d == Design::horizon || d == Design::omh;
}

void append_grid_line(std::string& out, const PlotFrame& f, double unit, bool major) {
    const double y = f.y_at_unit(unit);
    if (major) {
        out += strf("<line x1=\"%s\" y1=\"%s\" x2=\"%s\" y2=\"%s\" stroke=\"#555555\" stroke-width=\"1\"/>\n",
                    num(f.x0).c_str(), num(y).c_str(), num(f.x0 + f.w).c_str(), num(y).c_str());
    } else {
        out += strf("<line class=\"minor\" x1=\"%s\" y1=\"%s\" x2=\"%s\" y2=\"%s\" stroke=\"#555555\" stroke-width=\"1\" stroke-opacity=\"0.35\"/>\n",
                    num(f.x0).c_str(), num(y).c_str(), num(f.x0 + f.w).c_str(), num(y).c_str());
    }
}

void append_tick_label(std::string& out, const PlotFrame& f, double unit,
                       const std::string& label) {
    out += strf("<text x=\"%s\" y=\"%s\" font-size=\"11\" font-family=\"sans-serif\" text-anchor=\"end\" fill=\"#333333\">%s</text>\n",
                num(f.x0 - 6.0).c_str(), num(f.y_at_unit(unit) + 4.0).c_str(), label.c_str());
}

std::string polyline_path(const std::vector<double>& xs, const std::vector<double>& ys) {
    std::string d;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        d += (i == 0 ? "M" : " L");
        d += num(xs[i]) + "," + num(ys[i]);
    }
    return d;
}

/// Filled silhouette from the baseline up to per-sample fractions of a row.
std::string band_path(const std::vector<double>& fracs, const PlotFrame& f) {
    const std::size_t n = fracs.size();
    std::string d = "M" + num(f.x_at(0, n)) + "," + num(f.y0 + f.h);
    for (std::size_t i = 0; i < n; ++i) {
        d += " L" + num(f.x_at(i, n)) + "," + num(f.y0 + f.h * (1.0 - fracs[i]));
    }
    d += " L" + num(f.x_at(n - 1, n)) + "," + num(f.y0 + f.h) + " Z";
    return d;
}

void append_markers(std::string& out, const std::vector<Marker>& markers,
                    const PlotFrame& f, std::size_t n) {
    if (markers.empty()) return;
    out += "<g id=\"markers\">\n";
    for (const Marker& mk : markers) {
        const double x = f.x_at(static_cast<std::size_t>(mk.index), n);
        out += strf("<line x1=\"%s\" y1=\"%s\" x2=\"%s\" y2=\"%s\" stroke=\"#000000\" stroke-width=\"1.5\"/>\n",
                    num(x).c_str(), num(f.y0 - 10.0).c_str(), num(x).c_str(), num(f.y0 - 2.0).c_str());
        out += strf("<line x1=\"%s\" y1=\"%s\" x2=\"%s\" y2=\"%s\" stroke=\"#000000\" stroke-width=\"1.5\"/>\n",
                    num(x).c_str(), num(f.y0 + f.h + 2.0).c_str(), num(x).c_str(), num(f.y0 + f.h + 10.0).c_str());
        out += strf("<text x=\"%s\" y=\"%s\" font-size=\"13\" font-family=\"sans-serif\" text-anchor=\"middle\" fill=\"#000000\">%c</text>\n",
                    num(x).c_str(), num(f.y0 - 14.0).c_str(), mk.label);
    }
    out += "</g>\n";
}

void append_legend_row(std::string& out, double x, double y, const Hsl& color,
                       const std::string& label) {
    out += strf("<rect x=\"%s\" y=\"%s\" width=\"12\" height=\"12\" fill=\"%s\"/>\n",
                num(x).c_str(), num(y).c_str(), to_hex(color).c_str());
    out += strf("<text x=\"%s\" y=\"%s\" font-size=\"10\" font-family=\"sans-serif\" fill=\"#333333\">%s</text>\n",
                num(x + 16.0).c_str(), num(y + 10.0).c_str(), label.c_str());
}

}  // namespace

std::string to_string(Design d) {
    switch (d) {
        case Design::log_line: return "log";
        case Design::oml: return "oml";
        case Design::horizon: return "horizon";
        case Design::omh: return "omh";
        case Design::ssb: return "ssb";
    }
    throw std::invalid_argument("unknown design");
}

Design design_from_string(const std::string& name) {
    if (name == "log" || name == "log_line") return Design::log_line;
    if (name == "oml") return Design::oml;
    if (name == "horizon") return Design::horizon;
    if (name == "omh") return Design::omh;
    if (name == "ssb") return Design::ssb;
    throw std::invalid_argument("unknown design: " + name);
}

std::vector<GridLine> grid_positions(const MagnitudeRange& range, Design design) {
    const int d = range.decades();
    std::vector<GridLine> lines;
    switch (design) {
        case Design::log_line:
            for (int k = 0; k <= d; ++k) lines.push_back({static_cast<double>(k) / d, true});
            for (int k = 0; k < d; ++k) lines.push_back({(k + kLog10Of5) / d, false});
            break;
        case Design::oml:
            for (int k = 0; k <= d; ++k) lines.push_back({static_cast<double>(k) / d, true});
            for (int k = 0; k < d; ++k) lines.push_back({(k + 4.0 / 9.0) / d, false});
            break;
        case Design::omh:
            // Band-local coordinates; the single mantissa-5 line is shared by
            // every decade through the layering.
            lines.push_back({0.0, true});
            lines.push_back({1.0, true});
            lines.push_back({4.0 / 9.0, false});
            break;
        case Design::ssb:
            lines.push_back({0.0, true});
            lines.push_back({1.0, true});
            lines.push_back({0.5, false});
            break;
        case Design::horizon:
            lines.push_back({0.0, true});
            lines.push_back({1.0, true});
            break;
    }
    return lines;
}

std::vector<double> omh_band_fractions(double v, const MagnitudeRange& range) {
    if (!range.contains(v)) throw std::out_of_range("omh_band_fractions: value outside range");
    const MagnitudeValue mv = decompose(v, range);
    std::vector<double> fracs(static_cast<std::size_t>(range.decades()), 0.0);
    for (int b = 0; b < range.decades(); ++b) {
        const int e = range.e_min + b;
        if (e < mv.exponent) {
            fracs[static_cast<std::size_t>(b)] = 1.0;
        } else if (e == mv.exponent) {
            fracs[static_cast<std::size_t>(b)] = (mv.mantissa - 1.0) / 9.0;
        }
    }
    return fracs;
}

std::vector<double> horizon_band_fractions(double v, double top, int n_bands) {
    if (n_bands < 1) throw std::invalid_argument("horizon_band_fractions: n_bands < 1");
    if (!(top > 0.0)) throw std::invalid_argument("horizon_band_fractions: top must be positive");
    const double h = top / n_bands;
    std::vector<double> fracs(static_cast<std::size_t>(n_bands));
    for (int i = 0; i < n_bands; ++i) {
        fracs[static_cast<std::size_t>(i)] = std::clamp((v - i * h) / h, 0.0, 1.0);
    }
    return fracs;
}

std::vector<double> ssb_scale_fractions(double v, const MagnitudeRange& range) {
    if (!range.contains(v)) throw std::out_of_range("ssb_scale_fractions: value outside range");
    std::vector<double> fracs(static_cast<std::size_t>(range.decades()), -1.0);
    for (int k = 0; k < range.decades(); ++k) {
        const double top = std::pow(10.0, range.e_min + k + 1);
        if (v <= top * (1.0 + 1e-9)) {
            fracs[static_cast<std::size_t>(k)] = std::min(1.0, v / top);
        }
    }
    return fracs;
}

RenderedChart render(const Series& series, const ChartSpec& spec,
                     const OmcPalette& palette) {
    if (series.values.empty()) throw std::domain_error("render: empty series");
    if (spec.width_px <= 0 || spec.height_px <= 0) {
        throw std::domain_error("render: non-positive canvas size");
    }
    if (spec.n_bands < 1) throw std::domain_error("render: n_bands must be >= 1");
    const std::size_t n = series.values.size();
    for (const Marker& mk : spec.markers) {
        if (mk.index < 0 || static_cast<std::size_t>(mk.index) >= n) {
            throw std::domain_error("render: marker index outside series");
        }
    }
    if (spec.design != Design::horizon) {
        for (double v : series.values) {
            if (!spec.range.contains(v)) {
                throw std::out_of_range("render: series value outside chart range");
            }
        }
    } else {
        for (double v : series.values) {
            if (!(v > 0.0) || !std::isfinite(v)) {
                throw std::out_of_range("render: horizon values must be positive");
            }
        }
    }
    if (static_cast<int>(palette.hues.size()) < spec.range.decades() &&
        (spec.design == Design::oml || spec.design == Design::omh)) {
        throw std::out_of_range("render: palette smaller than chart range");
    }

    const bool legend = spec.show_legend && has_legend(spec.design);
    const double margin_left = 56.0;
    const double margin_right = legend ? 130.0 : 16.0;
    const double margin_top = 28.0;
    const double margin_bottom = 14.0;
    PlotFrame f{margin_left, margin_top,
                spec.width_px - margin_left - margin_right,
                spec.height_px - margin_top - margin_bottom};

    std::string doc;
    doc += strf("<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"%d\" height=\"%d\" viewBox=\"0 0 %d %d\">\n",
                spec.width_px, spec.height_px, spec.width_px, spec.height_px);
    doc += strf("<rect x=\"0\" y=\"0\" width=\"%d\" height=\"%d\" fill=\"#ffffff\"/>\n",
                spec.width_px, spec.height_px);

    const MagnitudeRange& range = spec.range;
    const int decades = range.decades();

    // ---- grid layer -------------------------------------------------------
    doc += "<g id=\"grid\">\n";
    switch (spec.design) {
        case Design::log_line:
        case Design::oml: {
            for (const GridLine& g : grid_positions(range, spec.design)) {
                append_grid_line(doc, f, g.y, g.major);
            }
            for (int k = 0; k <= decades; ++k) {
                append_tick_label(doc, f, static_cast<double>(k) / decades,
                                  value_label(std::pow(10.0, range.e_min + k)));
            }
            break;
        }
        case Design::omh: {
            for (const GridLine& g : grid_positions(range, spec.design)) {
                append_grid_line(doc, f, g.y, g.major);
            }
            append_tick_label(doc, f, 0.0, "1");
            append_tick_label(doc, f, 1.0, "10");
            break;
        }
        case Design::horizon: {
            const double top = *std::max_element(series.values.begin(), series.values.end());
            const double band_span = top / spec.n_bands;
            append_grid_line(doc, f, 0.0, true);
            append_grid_line(doc, f, 1.0, true);
            // Mantissa-5 lines folded into the shared band row.
            for (int k = range.e_min; k <= range.e_max; ++k) {
                const double v5 = 5.0 * std::pow(10.0, k);
                if (v5 > top) continue;
                double pos = std::fmod(v5, band_span) / band_span;
                if (v5 == top) pos = 1.0;
                append_grid_line(doc, f, pos, false);
            }
            append_tick_label(doc, f, 0.0, "0");
            append_tick_label(doc, f, 1.0, value_label(band_span));
            break;
        }
        case Design::ssb: {
            const double gap = 4.0;
            const double sub_h = (f.h - gap * (decades - 1)) / decades;
            for (int k = 0; k < decades; ++k) {
                // Sub-plot k counts from the smallest scale at the bottom.
                PlotFrame sub{f.x0, f.y0 + (decades - 1 - k) * (sub_h + gap), f.w, sub_h};
                for (const GridLine& g : grid_positions(range, Design::ssb)) {
                    append_grid_line(doc, sub, g.y, g.major);
                }
                append_tick_label(doc, sub, 1.0,
                                  value_label(std::pow(10.0, range.e_min + k + 1)));
                if (k == 0) append_tick_label(doc, sub, 0.0, "0");
            }
            break;
        }
    }
    doc += "</g>\n";

    // ---- data / band layers ----------------------------------------------
    switch (spec.design) {
        case Design::log_line: {
            std::vector<double> xs(n), ys(n);
            for (std::size_t i = 0; i < n; ++i) {
                xs[i] = f.x_at(i, n);
                ys[i] = f.y_at_unit(log_y(series.values[i], range));
            }
            doc += "<g id=\"data\">\n";
            doc += strf("<path d=\"%s\" fill=\"none\" stroke=\"#202020\" stroke-width=\"1.5\"/>\n",
                        polyline_path(xs, ys).c_str());
            doc += "</g>\n";
            break;
        }
        case Design::oml: {
            doc += "<g id=\"data\">\n";
            const double dx = n > 1 ? f.w / static_cast<double>(n - 1) : f.w;
            std::vector<double> xs(n), ys(n);
            for (std::size_t i = 0; i < n; ++i) {
                xs[i] = f.x_at(i, n);
                ys[i] = f.y_at_unit(piecewise_y(series.values[i], range));
                // Per-sample slab from the baseline to the sample height.
                const double left = std::max(f.x0, xs[i] - dx / 2.0);
                const double right = std::min(f.x0 + f.w, xs[i] + dx / 2.0);
                const Hsl c = omc_color(decompose(series.values[i], range), palette, range);
                doc += strf("<rect x=\"%s\" y=\"%s\" width=\"%s\" height=\"%s\" fill=\"%s\"/>\n",
                            num(left).c_str(), num(ys[i]).c_str(),
                            num(right - left).c_str(), num(f.y0 + f.h - ys[i]).c_str(),
                            to_hex(c).c_str());
            }
            doc += strf("<path d=\"%s\" fill=\"none\" stroke=\"#202020\" stroke-width=\"1.5\"/>\n",
                        polyline_path(xs, ys).c_str());
            doc += "</g>\n";
            break;
        }
        case Design::horizon: {
            const double top = *std::max_element(series.values.begin(), series.values.end());
            doc += "<g id=\"bands\">\n";
            for (int b = 0; b < spec.n_bands; ++b) {
                std::vector<double> fracs(n);
                for (std::size_t i = 0; i < n; ++i) {
                    fracs[i] = horizon_band_fractions(series.values[i], top, spec.n_bands)
                                   [static_cast<std::size_t>(b)];
                }
                doc += strf("<path d=\"%s\" fill=\"%s\"/>\n", band_path(fracs, f).c_str(),
                            to_hex(horizon_band_color(b, spec.n_bands)).c_str());
            }
            doc += "</g>\n";
            break;
        }
        case Design::omh: {
            doc += "<g id=\"bands\">\n";
            for (int b = 0; b < decades; ++b) {
                std::vector<double> fracs(n);
                for (std::size_t i = 0; i < n; ++i) {
                    fracs[i] = omh_band_fractions(series.values[i], range)
                                   [static_cast<std::size_t>(b)];
                }
                doc += strf("<path d=\"%s\" fill=\"%s\"/>\n", band_path(fracs, f).c_str(),
                            to_hex(omh_band_color(b, palette)).c_str());
            }
            doc += "</g>\n";
            break;
        }
        case Design::ssb: {
            doc += "<g id=\"data\">\n";
            const double gap = 4.0;
            const double sub_h = (f.h - gap * (decades - 1)) / decades;
            const double bar_w = std::max(0.5, f.w / static_cast<double>(n) - 1.0);
            for (int k = 0; k < decades; ++k) {
                PlotFrame sub{f.x0, f.y0 + (decades - 1 - k) * (sub_h + gap), f.w, sub_h};
                for (std::size_t i = 0; i < n; ++i) {
                    const double frac =
                        ssb_scale_fractions(series.values[i], range)[static_cast<std::size_t>(k)];
                    if (frac < 0.0) continue;
                    const double x = f.x0 + f.w * static_cast<double>(i) / static_cast<double>(n);
                    const double bar_h = sub.h * frac;
                    doc += strf("<rect x=\"%s\" y=\"%s\" width=\"%s\" height=\"%s\" fill=\"#4a4a4a\"/>\n",
                                num(x).c_str(), num(sub.y0 + sub.h - bar_h).c_str(),
                                num(bar_w).c_str(), num(bar_h).c_str());
                }
            }
            doc += "</g>\n";
            break;
        }
    }

    append_markers(doc, spec.markers, f, n);

    // ---- legend -----------------------------------------------------------
    if (legend) {
        doc += "<g id=\"legend\">\n";
        const double lx = f.x0 + f.w + 14.0;
        double ly = f.y0;
        switch (spec.design) {
            case Design::omh: {
                for (int b = decades - 1; b >= 0; --b) {
                    const double lo = std::pow(10.0, range.e_min + b);
                    const std::string label =
                        value_label(lo) + "-" + value_label(lo * 10.0);
                    append_legend_row(doc, lx, ly, omh_band_color(b, palette), label);
                    ly += 18.0;
                }
                break;
            }
            case Design::oml: {
                // One row per decade, a short mantissa ramp per row.
                for (int b = decades - 1; b >= 0; --b) {
                    const double lo = std::pow(10.0, range.e_min + b);
                    for (int s = 0; s < 5; ++s) {
                        const double m = 1.0 + 9.0 * static_cast<double>(s) / 4.0;
                        const Hsl c = omc_color(MagnitudeValue{lo * m, m, range.e_min + b},
                                                palette, range);
                        doc += strf("<rect x=\"%s\" y=\"%s\" width=\"10\" height=\"12\" fill=\"%s\"/>\n",
                                    num(lx + 10.0 * s).c_str(), num(ly).c_str(),
                                    to_hex(c).c_str());
                    }
                    doc += strf("<text x=\"%s\" y=\"%s\" font-size=\"10\" font-family=\"sans-serif\" fill=\"#333333\">%s</text>\n",
                                num(lx + 54.0).c_str(), num(ly + 10.0).c_str(),
                                (value_label(lo) + "-" + value_label(lo * 10.0)).c_str());
                    ly += 18.0;
                }
                break;
            }
            case Design::horizon: {
                const double top = *std::max_element(series.values.begin(), series.values.end());
                const double band_span = top / spec.n_bands;
                for (int b = spec.n_bands - 1; b >= 0; --b) {
                    const std::string label = strf("%.4g-%.4g", b * band_span,
                                                   (b + 1) * band_span);
                    append_legend_row(doc, lx, ly, horizon_band_color(b, spec.n_bands), label);
                    ly += 18.0;
                }
                break;
            }
            default:
                break;
        }
        doc += "</g>\n";
    }

    doc += "</svg>\n";
    return RenderedChart{doc};
}

}  // namespace omviz
