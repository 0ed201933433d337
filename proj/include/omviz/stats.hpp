#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace omviz::stats {

struct AnalysisConfig {
    double alpha = 0.05;
    int bonferroni_factor = 10;
};

struct BoxStats {
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
    double whisker_low = 0.0;
    double whisker_high = 0.0;
    std::vector<double> outliers;
};

/// |1 - response/correct|: relative deviation; values >= 1 indicate the
/// responder misjudged the order of magnitude.
double relative_error(double response, double correct);

int binary_error(const std::string& response, const std::string& correct);

/// Quartiles by linear interpolation between order statistics (type 7);
/// whiskers reach the furthest datum within 1.5*IQR of the box.
BoxStats box_stats(const std::vector<double>& xs);

/// Mean excluding box_stats outliers.
double adjusted_mean(const std::vector<double>& xs);

/// Chi-squared survival function via the regularized incomplete gamma
/// function; absolute error below 1e-9.
double chi2_sf(double x, int df);

struct KruskalWallisResult {
    double H;
    double p;
};
KruskalWallisResult kruskal_wallis(const std::vector<std::vector<double>>& groups);

struct MannWhitneyResult {
    double U;  // statistic for the first sample
    double p;  // two-sided
};
/// Exact conditional distribution for small samples, normal approximation
/// with tie and continuity corrections otherwise.
MannWhitneyResult mann_whitney(const std::vector<double>& xs,
                               const std::vector<double>& ys);

struct Chi2Result {
    double chi2;
    int df;
    double p;
};
Chi2Result chi2_independence(const std::vector<std::vector<double>>& table);

double bonferroni(double p, const AnalysisConfig& cfg);

// ---- response analysis ----------------------------------------------------

struct ScoredRow {
    std::string participant;
    std::string design;
    std::string task;
    int condition = 0;
    std::string trial_id;
    double error = 0.0;
    int confidence = 0;
    double elapsed_ms = 0.0;
};

std::vector<ScoredRow> scored_rows_from_csv_text(const std::string& text);
std::vector<ScoredRow> scored_rows_from_csv_file(const std::string& path);
std::string scored_rows_to_csv(const std::vector<ScoredRow>& rows);

struct DesignSummary {
    std::string design;
    int n = 0;
    BoxStats error_box;
    double error_adjusted_mean = 0.0;
    double mean_confidence = 0.0;
    double time_adjusted_mean = 0.0;
};

/// Lower-triangle matrix of Bonferroni-adjusted pairwise p-values, indexed by
/// the design order of the omnibus groups. Absent when the omnibus stage was
/// not significant.
struct PairwiseMatrix {
    std::vector<std::string> designs;
    std::vector<std::vector<double>> p;  // p[i][j] valid for j < i
};

struct TaskAnalysis {
    std::string task;
    double error_H = 0.0, error_p = 1.0;
    double time_H = 0.0, time_p = 1.0;
    double confidence_chi2 = 0.0, confidence_p = 1.0;
    int confidence_df = 0;
    std::optional<PairwiseMatrix> error_pairwise;
    std::optional<PairwiseMatrix> time_pairwise;
    std::optional<PairwiseMatrix> confidence_pairwise;
};

struct AnalysisReport {
    std::vector<DesignSummary> summaries;  // pooled across tasks
    std::vector<TaskAnalysis> tasks;
};

/// Three stages: the nonparametric-test choice is taken as given, omnibus
/// Kruskal-Wallis (errors, times) and chi-squared independence (confidence)
/// per task, then pairwise post-hoc tests with Bonferroni adjustment only
/// where the omnibus stage was significant.
AnalysisReport analyze(const std::vector<ScoredRow>& rows, const AnalysisConfig& cfg);

std::string report_to_json(const AnalysisReport& report);

/// Plain-text triangle matrices, one block per task and measure.
std::string report_triangle_text(const AnalysisReport& report);

}  // namespace omviz::stats
