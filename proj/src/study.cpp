#include "omviz/study.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "omviz/datagen.hpp"

namespace omviz {

namespace {

constexpr double kGridTol = 0.05;       // mantissa units
constexpr int kMinMarkerSeparation = 5;  // samples
constexpr int kRetryBudget = 50;

bool on_grid(double mantissa) {
    return std::fabs(mantissa - 1.0) <= kGridTol ||
           std::fabs(mantissa - 5.0) <= kGridTol || mantissa >= 10.0 - kGridTol;
}

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

SeriesKind trend_kind_for_condition(int condition) {
    switch (condition) {
        case 1: return SeriesKind::periodic;
        case 2: return SeriesKind::linear;
        case 3: return SeriesKind::exponential;
    }
    throw std::invalid_argument("trend condition must be 1..3");
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

}  // namespace

std::string to_string(Task t) {
    switch (t) {
        case Task::identification: return "identification";
        case Task::discrimination: return "discrimination";
        case Task::estimation: return "estimation";
        case Task::trend: return "trend";
    }
    throw std::invalid_argument("unknown task");
}

Task task_from_string(const std::string& name) {
    if (name == "identification") return Task::identification;
    if (name == "discrimination") return Task::discrimination;
    if (name == "estimation") return Task::estimation;
    if (name == "trend") return Task::trend;
    throw std::invalid_argument("unknown task: " + name);
}

int select_identification_point(const Series& series, int condition, SplitMix64& rng) {
    std::vector<int> candidates;
    for (std::size_t i = 0; i < series.values.size(); ++i) {
        const MagnitudeValue mv = decompose(series.values[i], series.range);
        bool ok = false;
        switch (condition) {
            case 1:
                ok = on_grid(mv.mantissa);
                break;
            case 2:
                ok = (mv.exponent == 3 || mv.exponent == 4) && !on_grid(mv.mantissa);
                break;
            case 3:
                ok = (mv.exponent == 1 || mv.exponent == 2) && !on_grid(mv.mantissa);
                break;
            default:
                throw std::invalid_argument("identification condition must be 1..3");
        }
        if (ok) candidates.push_back(static_cast<int>(i));
    }
    if (candidates.empty()) {
        throw SelectionError("no sample satisfies identification condition " +
                             std::to_string(condition));
    }
    return candidates[rng.next_below(candidates.size())];
}

std::pair<int, int> select_pair(const Series& series, int condition, SplitMix64& rng) {
    if (condition < 1 || condition > 3) {
        throw std::invalid_argument("pair condition must be 1..3");
    }
    const int n = static_cast<int>(series.values.size());
    std::vector<std::pair<int, int>> candidates;
    for (int i = 0; i < n; ++i) {
        const int ei = decompose(series.values[i], series.range).exponent;
        for (int j = i + kMinMarkerSeparation; j < n; ++j) {
            const int ej = decompose(series.values[j], series.range).exponent;
            const int gap = std::abs(ei - ej);
            const bool ok = (condition == 1 && gap == 0) ||
                            (condition == 2 && gap == 1) ||
                            (condition == 3 && gap >= 2);
            if (!ok) continue;
            // The larger value must be readable: reject near-equal pairs.
            const double hi = std::max(series.values[i], series.values[j]);
            if (std::fabs(series.values[i] - series.values[j]) / hi < 0.01) continue;
            candidates.emplace_back(i, j);
        }
    }
    if (candidates.empty()) {
        throw SelectionError("no pair satisfies condition " + std::to_string(condition));
    }
    return candidates[rng.next_below(candidates.size())];
}

Study build_study(std::uint64_t master_seed) {
    SplitMix64 master(master_seed);
    Study study;
    study.master_seed = master_seed;

    const Design designs[] = {Design::log_line, Design::oml, Design::horizon,
                              Design::omh, Design::ssb};
    const Task tasks[] = {Task::identification, Task::discrimination,
                          Task::estimation, Task::trend};

    for (Design design : designs) {
        for (Task task : tasks) {
            for (int condition = 1; condition <= 3; ++condition) {
                TrialSpec trial;
                trial.design = design;
                trial.task = task;
                trial.condition = condition;
                trial.trial_id = to_string(design) + "_" + to_string(task) + "_c" +
                                 std::to_string(condition);
                SplitMix64 sel(master.next());

                bool done = false;
                for (int attempt = 0; attempt < kRetryBudget && !done; ++attempt) {
                    const std::uint64_t seed = master.next();
                    Series series;
                    if (task == Task::trend) {
                        trial.data_kind = trend_kind_for_condition(condition);
                        series = trend_series(trial.data_kind, seed);
                    } else {
                        trial.data_kind = SeriesKind::walk;
                        series = random_walk(seed);
                    }
                    try {
                        switch (task) {
                            case Task::identification: {
                                int idx;
                                if (condition == 1) {
                                    // Manufacture an exactly-on-grid sample.
                                    idx = static_cast<int>(
                                        sel.next_below(series.values.size()));
                                    const double grid_m =
                                        sel.next_below(2) == 0 ? 1.0 : 5.0;
                                    int e = decompose(series.values[static_cast<std::size_t>(idx)])
                                                .exponent;
                                    if (e > series.range.e_max) e = series.range.e_max;
                                    series.values[static_cast<std::size_t>(idx)] =
                                        compose(grid_m, e);
                                } else {
                                    idx = select_identification_point(series, condition, sel);
                                }
                                trial.marked = {{'A', idx}};
                                trial.correct_answer =
                                    format_number(series.values[static_cast<std::size_t>(idx)]);
                                break;
                            }
                            case Task::discrimination:
                            case Task::estimation: {
                                const auto [a, b] = select_pair(series, condition, sel);
                                trial.marked = {{'A', a}, {'B', b}};
                                const double va = series.values[static_cast<std::size_t>(a)];
                                const double vb = series.values[static_cast<std::size_t>(b)];
                                if (task == Task::discrimination) {
                                    trial.correct_answer = va > vb ? "A" : "B";
                                } else {
                                    trial.correct_answer = format_number(std::fabs(vb - va));
                                }
                                break;
                            }
                            case Task::trend:
                                trial.marked.clear();
                                trial.correct_answer = to_string(trial.data_kind);
                                break;
                        }
                        trial.dataset_seed = seed;
                        trial.dataset = std::move(series);
                        done = true;
                    } catch (const SelectionError&) {
                        // regenerate dataset
                    }
                }
                if (!done) {
                    throw GenerationError("condition unsatisfiable after " +
                                          std::to_string(kRetryBudget) +
                                          " datasets: " + trial.trial_id);
                }
                study.trials.push_back(std::move(trial));
            }
        }
    }
    return study;
}

double score(const TrialSpec& trial, const ResponseRecord& response) {
    switch (trial.task) {
        case Task::identification:
        case Task::estimation: {
            double value;
            try {
                std::size_t pos = 0;
                value = std::stod(response.response, &pos);
                if (pos != response.response.size()) {
                    throw std::invalid_argument("trailing characters");
                }
            } catch (const std::exception&) {
                throw std::invalid_argument("scoring: numeric response expected for " +
                                            trial.trial_id + ", got '" +
                                            response.response + "'");
            }
            return stats::relative_error(value, std::stod(trial.correct_answer));
        }
        case Task::discrimination:
        case Task::trend:
            return stats::binary_error(response.response, trial.correct_answer);
    }
    throw std::invalid_argument("scoring: unknown task");
}

// ---- study files -----------------------------------------------------------

void write_study(const Study& study, const std::string& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    nlohmann::json j;
    j["master_seed"] = study.master_seed;
    j["trials"] = nlohmann::json::array();
    for (const TrialSpec& t : study.trials) {
        const std::string dataset_file = t.trial_id + ".csv";
        std::ofstream csv(fs::path(dir) / dataset_file);
        csv << series_to_csv(t.dataset);
        nlohmann::json tj;
        tj["trial_id"] = t.trial_id;
        tj["design"] = to_string(t.design);
        tj["task"] = to_string(t.task);
        tj["condition"] = t.condition;
        tj["dataset_seed"] = t.dataset_seed;
        tj["data_kind"] = to_string(t.data_kind);
        tj["dataset_file"] = dataset_file;
        tj["range"] = {{"e_min", t.dataset.range.e_min}, {"e_max", t.dataset.range.e_max}};
        tj["marked"] = nlohmann::json::array();
        for (const Marker& m : t.marked) {
            tj["marked"].push_back({{"label", std::string(1, m.label)}, {"index", m.index}});
        }
        tj["correct_answer"] = t.correct_answer;
        j["trials"].push_back(tj);
    }
    std::ofstream out(fs::path(dir) / "manifest.json");
    out << j.dump(2) << "\n";
}

Study load_study(const std::string& manifest_path) {
    namespace fs = std::filesystem;
    std::ifstream in(manifest_path);
    if (!in) throw std::runtime_error("cannot open study manifest: " + manifest_path);
    nlohmann::json j;
    in >> j;
    const fs::path dir = fs::path(manifest_path).parent_path();

    Study study;
    study.master_seed = j.at("master_seed").get<std::uint64_t>();
    for (const auto& tj : j.at("trials")) {
        TrialSpec t;
        t.trial_id = tj.at("trial_id").get<std::string>();
        t.design = design_from_string(tj.at("design").get<std::string>());
        t.task = task_from_string(tj.at("task").get<std::string>());
        t.condition = tj.at("condition").get<int>();
        t.dataset_seed = tj.at("dataset_seed").get<std::uint64_t>();
        t.data_kind = series_kind_from_string(tj.at("data_kind").get<std::string>());
        t.correct_answer = tj.at("correct_answer").get<std::string>();
        for (const auto& mj : tj.at("marked")) {
            t.marked.push_back(
                {mj.at("label").get<std::string>().at(0), mj.at("index").get<int>()});
        }
        t.dataset = series_from_csv_file(
            (dir / tj.at("dataset_file").get<std::string>()).string());
        t.dataset.seed = t.dataset_seed;
        t.dataset.kind = t.data_kind;
        t.dataset.range = MagnitudeRange{tj.at("range").at("e_min").get<int>(),
                                         tj.at("range").at("e_max").get<int>()};
        study.trials.push_back(std::move(t));
    }
    return study;
}

std::vector<RawResponse> responses_from_csv_text(const std::string& text) {
    std::vector<RawResponse> out;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    std::string errors;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line.rfind("participant", 0) == 0) continue;
        const auto f = split_csv_line(line);
        if (f.size() != 8) {
            errors += "line " + std::to_string(lineno) + ": expected 8 fields\n";
            continue;
        }
        try {
            RawResponse r;
            r.participant = f[0];
            r.design = f[1];
            r.task = f[2];
            r.condition = std::stoi(f[3]);
            r.trial_id = f[4];
            r.response = f[5];
            r.confidence = std::stoi(f[6]);
            r.elapsed_ms = std::stod(f[7]);
            if (r.confidence < 1 || r.confidence > 5) {
                throw std::runtime_error("confidence outside 1..5");
            }
            if (r.elapsed_ms < 0.0) throw std::runtime_error("negative elapsed time");
            out.push_back(std::move(r));
        } catch (const std::exception& e) {
            errors += "line " + std::to_string(lineno) + ": " + e.what() + "\n";
        }
    }
    if (!errors.empty()) throw std::runtime_error("responses csv parse errors:\n" + errors);
    return out;
}

std::vector<RawResponse> responses_from_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open responses file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return responses_from_csv_text(ss.str());
}

std::string responses_to_csv(const std::vector<RawResponse>& responses) {
    std::string out =
        "participant_id,design,task,condition,trial_id,response,confidence,elapsed_ms\n";
    char buf[32];
    for (const RawResponse& r : responses) {
        std::snprintf(buf, sizeof(buf), "%g", r.elapsed_ms);
        out += r.participant + "," + r.design + "," + r.task + "," +
               std::to_string(r.condition) + "," + r.trial_id + "," + r.response + "," +
               std::to_string(r.confidence) + "," + buf + "\n";
    }
    return out;
}

std::vector<stats::ScoredRow> score_responses(const Study& study,
                                              const std::vector<RawResponse>& responses) {
    std::map<std::string, const TrialSpec*> by_id;
    for (const TrialSpec& t : study.trials) by_id[t.trial_id] = &t;

    std::vector<stats::ScoredRow> rows;
    rows.reserve(responses.size());
    for (const RawResponse& r : responses) {
        const auto it = by_id.find(r.trial_id);
        if (it == by_id.end()) {
            throw std::runtime_error("response references unknown trial: " + r.trial_id);
        }
        const TrialSpec& trial = *it->second;
        ResponseRecord rec{r.trial_id, r.response, r.confidence, r.elapsed_ms};
        stats::ScoredRow row;
        row.participant = r.participant;
        row.design = to_string(trial.design);
        row.task = to_string(trial.task);
        row.condition = trial.condition;
        row.trial_id = r.trial_id;
        row.error = score(trial, rec);
        row.confidence = r.confidence;
        row.elapsed_ms = r.elapsed_ms;
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace omviz
