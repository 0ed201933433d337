#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "omviz/chart.hpp"
#include "omviz/rng.hpp"
#include "omviz/series.hpp"
#include "omviz/stats.hpp"

namespace omviz {

enum class Task { identification, discrimination, estimation, trend };

std::string to_string(Task t);
Task task_from_string(const std::string& name);

/// Thrown when a generated dataset offers no sample satisfying the trial's
/// data condition; the caller regenerates the dataset.
struct SelectionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Thrown when a condition stays unsatisfiable across the whole retry budget.
struct GenerationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TrialSpec {
    std::string trial_id;
    Design design;
    Task task;
    int condition = 1;  // 1..3
    std::uint64_t dataset_seed = 0;
    SeriesKind data_kind = SeriesKind::walk;
    std::vector<Marker> marked;
    std::string correct_answer;  // number, letter, or trend name
    Series dataset;              // as stored; condition-1 identification snaps one sample
};

struct ResponseRecord {
    std::string trial_id;
    std::string response;
    int confidence = 3;  // 1..5
    double elapsed_ms = 0.0;
};

struct Study {
    std::uint64_t master_seed = 0;
    std::vector<TrialSpec> trials;
};

/// Full stimulus set: 5 designs x 4 tasks x 3 conditions = 60 trials, each
/// with its own dataset. Deterministic per master seed.
Study build_study(std::uint64_t master_seed);

/// Index of a sample matching the identification condition:
///   1 - on a grid line (mantissa near 1 or 5)
///   2 - high order of magnitude (e in {3,4}), off-grid
///   3 - low order of magnitude (e in {1,2}), off-grid
int select_identification_point(const Series& series, int condition, SplitMix64& rng);

/// Index pair (A before B on the x-axis, at least 5 samples apart) whose
/// exponents are equal (condition 1), adjacent (2), or >= 2 apart (3).
std::pair<int, int> select_pair(const Series& series, int condition, SplitMix64& rng);

/// Error value for one response: relative error for identification and
/// estimation, binary error for discrimination and trend.
double score(const TrialSpec& trial, const ResponseRecord& response);

// ---- study and response files ---------------------------------------------

/// Writes <dir>/manifest.json plus one dataset CSV per trial.
void write_study(const Study& study, const std::string& dir);
Study load_study(const std::string& manifest_path);

struct RawResponse {
    std::string participant;
    std::string design;
    std::string task;
    int condition = 0;
    std::string trial_id;
    std::string response;
    int confidence = 0;
    double elapsed_ms = 0.0;
};

std::vector<RawResponse> responses_from_csv_text(const std::string& text);
std::vector<RawResponse> responses_from_csv_file(const std::string& path);
std::string responses_to_csv(const std::vector<RawResponse>& responses);

/// Join responses against the study by trial id and score each one.
std::vector<stats::ScoredRow> score_responses(const Study& study,
                                              const std::vector<RawResponse>& responses);

}  // namespace omviz
