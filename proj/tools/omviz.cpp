#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "omviz/chart.hpp"
#include "omviz/datagen.hpp"
#include "omviz/series.hpp"
#include "omviz/stats.hpp"
#include "omviz/study.hpp"

namespace fs = std::filesystem;
using namespace omviz;

namespace {

/// OMVIZ_OUT_DIR provides the default directory for relative output paths.
fs::path resolve_out(const std::string& path) {
    fs::path p(path);
    if (p.is_absolute()) return p;
    if (const char* base = std::getenv("OMVIZ_OUT_DIR")) {
        return fs::path(base) / p;
    }
    return p;
}

void write_file(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

std::vector<Marker> parse_markers(const std::vector<std::string>& specs) {
    std::vector<Marker> markers;
    for (const std::string& s : specs) {
        const auto colon = s.find(':');
        if (colon != 1 || s.size() < 3) {
            throw CLI::ValidationError("--marker", "expected LABEL:INDEX, got '" + s + "'");
        }
        markers.push_back({s[0], std::stoi(s.substr(2))});
    }
    return markers;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Deterministic rendering and evaluation toolkit for time-series "
                 "spanning several orders of magnitude"};
    app.require_subcommand(1);

    // gen-walk
    auto* gen_walk = app.add_subcommand("gen-walk", "Generate a constrained random walk");
    std::uint64_t walk_seed = 0;
    int walk_n = 100;
    std::string walk_out;
    gen_walk->add_option("--seed", walk_seed, "Generator seed")->required();
    gen_walk->add_option("--n", walk_n, "Number of samples")->capture_default_str();
    gen_walk->add_option("--out", walk_out, "Output CSV path")->required();

    // gen-trend
    auto* gen_trend = app.add_subcommand("gen-trend", "Generate a trend series");
    std::string trend_kind;
    std::uint64_t trend_seed = 0;
    int trend_n = 100;
    std::string trend_out;
    gen_trend->add_option("--kind", trend_kind, "periodic | linear | exponential")->required();
    gen_trend->add_option("--seed", trend_seed, "Generator seed")->required();
    gen_trend->add_option("--n", trend_n, "Number of samples")->capture_default_str();
    gen_trend->add_option("--out", trend_out, "Output CSV path")->required();

    // render
    auto* render_cmd = app.add_subcommand("render", "Render a series to SVG");
    std::string render_design, render_input, render_out, render_palette;
    int render_w = 972, render_h = 350;
    std::vector<std::string> marker_specs;
    render_cmd->add_option("--design", render_design, "log | oml | horizon | omh | ssb")
        ->required();
    render_cmd->add_option("--input", render_input, "Series CSV (index,value)")->required();
    render_cmd->add_option("--out", render_out, "Output SVG path")->required();
    render_cmd->add_option("--width", render_w, "Canvas width in px")->capture_default_str();
    render_cmd->add_option("--height", render_h, "Canvas height in px")->capture_default_str();
    render_cmd->add_option("--marker", marker_specs, "Marker as LABEL:INDEX (repeatable)");
    render_cmd->add_option("--palette", render_palette, "Palette override JSON file");

    // build-study
    auto* build_cmd = app.add_subcommand("build-study", "Build the 60-trial stimulus set");
    std::uint64_t master_seed = 0;
    std::string study_dir;
    bool with_charts = false;
    build_cmd->add_option("--master-seed", master_seed, "Master seed")->required();
    build_cmd->add_option("--out-dir", study_dir, "Output directory")->required();
    build_cmd->add_flag("--charts", with_charts, "Also render one SVG per trial");

    // score
    auto* score_cmd = app.add_subcommand("score", "Score responses against a study");
    std::string score_study, score_responses_path, score_out;
    score_cmd->add_option("--study", score_study, "Study manifest.json")->required();
    score_cmd->add_option("--responses", score_responses_path, "Responses CSV")->required();
    score_cmd->add_option("--out", score_out, "Scored CSV path")->required();

    // analyze
    auto* analyze_cmd = app.add_subcommand("analyze", "Run the significance pipeline");
    std::string analyze_scored, analyze_out, analyze_matrices;
    stats::AnalysisConfig cfg;
    analyze_cmd->add_option("--scored", analyze_scored, "Scored CSV path")->required();
    analyze_cmd->add_option("--out", analyze_out, "Report JSON path")->required();
    analyze_cmd->add_option("--matrices", analyze_matrices,
                            "Optional plain-text triangle matrices path");
    analyze_cmd->add_option("--alpha", cfg.alpha, "Significance level")->capture_default_str();
    analyze_cmd->add_option("--bonferroni", cfg.bonferroni_factor,
                            "Bonferroni correction factor")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (gen_walk->parsed()) {
            const Series s = random_walk(walk_seed, walk_n);
            write_file(resolve_out(walk_out), series_to_csv(s));
        } else if (gen_trend->parsed()) {
            const SeriesKind kind = series_kind_from_string(trend_kind);
            const Series s = trend_series(kind, trend_seed, trend_n);
            write_file(resolve_out(trend_out), series_to_csv(s));
        } else if (render_cmd->parsed()) {
            Series s = series_from_csv_file(render_input);
            ChartSpec spec;
            spec.design = design_from_string(render_design);
            spec.width_px = render_w;
            spec.height_px = render_h;
            spec.markers = parse_markers(marker_specs);
            const OmcPalette palette = render_palette.empty()
                                           ? OmcPalette::default_palette()
                                           : OmcPalette::from_json_file(render_palette);
            write_file(resolve_out(render_out), render(s, spec, palette).document);
        } else if (build_cmd->parsed()) {
            const Study study = build_study(master_seed);
            const fs::path dir = resolve_out(study_dir);
            write_study(study, dir.string());
            if (with_charts) {
                const OmcPalette palette = OmcPalette::default_palette();
                for (const TrialSpec& t : study.trials) {
                    ChartSpec spec;
                    spec.design = t.design;
                    spec.markers = t.marked;
                    write_file(dir / (t.trial_id + ".svg"),
                               render(t.dataset, spec, palette).document);
                }
            }
        } else if (score_cmd->parsed()) {
            const Study study = load_study(score_study);
            const auto responses = responses_from_csv_file(score_responses_path);
            const auto rows = score_responses(study, responses);
            write_file(resolve_out(score_out), stats::scored_rows_to_csv(rows));
        } else if (analyze_cmd->parsed()) {
            const auto rows = stats::scored_rows_from_csv_file(analyze_scored);
            const stats::AnalysisReport report = stats::analyze(rows, cfg);
            write_file(resolve_out(analyze_out), stats::report_to_json(report));
            if (!analyze_matrices.empty()) {
                write_file(resolve_out(analyze_matrices), stats::report_triangle_text(report));
            }
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
