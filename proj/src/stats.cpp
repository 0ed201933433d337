#include "omviz/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace omviz::stats {

namespace {

// ---- regularized incomplete gamma ----------------------------------------

constexpr int kMaxIter = 500;
constexpr double kEps = 1e-16;

/// Lower regularized incomplete gamma P(a,x) by series expansion; use for x < a+1.
double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < kMaxIter; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * kEps) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

/// Upper regularized incomplete gamma Q(a,x) by Lentz continued fraction; x >= a+1.
double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= kMaxIter; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q(double a, double x) {
    if (x <= 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_cf(a, x);
}

// ---- ranking ---------------------------------------------------------------

/// Average ranks (1-based) with ties shared; also returns sum of t^3 - t over
/// tie groups for the variance corrections.
std::vector<double> ranks_with_ties(const std::vector<double>& values, double* tie_sum) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n);
    double ties = 0.0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
        const double t = static_cast<double>(j - i + 1);
        ties += t * t * t - t;
        i = j + 1;
    }
    if (tie_sum) *tie_sum = ties;
    return ranks;
}

double std_normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double u_statistic(const std::vector<double>& xs, const std::vector<double>& ys) {
    double u = 0.0;
    for (double x : xs) {
        for (double y : ys) {
            if (y < x) u += 1.0;
            else if (y == x) u += 0.5;
        }
    }
    return u;
}

/// Exact two-sided p conditional on the observed values: enumerate every
/// assignment of n1 of the pooled observations to the first group.
double mann_whitney_exact_p(const std::vector<double>& xs, const std::vector<double>& ys) {
    std::vector<double> pooled(xs);
    pooled.insert(pooled.end(), ys.begin(), ys.end());
    const std::size_t n = pooled.size();
    const std::size_t n1 = xs.size();
    const double mu = 0.5 * static_cast<double>(n1) * static_cast<double>(n - n1);
    const double dev_obs = std::fabs(u_statistic(xs, ys) - mu);

    std::vector<std::size_t> idx(n1);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    long long total = 0, extreme = 0;
    while (true) {
        std::vector<char> chosen(n, 0);
        for (std::size_t i : idx) chosen[i] = 1;
        double u = 0.0;
        for (std::size_t a = 0; a < n; ++a) {
            if (!chosen[a]) continue;
            for (std::size_t b = 0; b < n; ++b) {
                if (chosen[b]) continue;
                if (pooled[b] < pooled[a]) u += 1.0;
                else if (pooled[b] == pooled[a]) u += 0.5;
            }
        }
        ++total;
        if (std::fabs(u - mu) >= dev_obs - 1e-12) ++extreme;

        // next combination
        std::size_t k = n1;
        while (k > 0 && idx[k - 1] == n - n1 + k - 1) --k;
        if (k == 0) break;
        ++idx[k - 1];
        for (std::size_t j = k; j < n1; ++j) idx[j] = idx[j - 1] + 1;
    }
    return static_cast<double>(extreme) / static_cast<double>(total);
}

double binom(std::size_t n, std::size_t k) {
    double r = 1.0;
    for (std::size_t i = 0; i < k; ++i) {
        r = r * static_cast<double>(n - i) / static_cast<double>(i + 1);
    }
    return r;
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

double relative_error(double response, double correct) {
    if (correct == 0.0) throw std::domain_error("relative_error: correct value is zero");
    return std::fabs(1.0 - response / correct);
}

int binary_error(const std::string& response, const std::string& correct) {
    return response == correct ? 0 : 1;
}

BoxStats box_stats(const std::vector<double>& xs) {
    if (xs.empty()) throw std::domain_error("box_stats: empty sample");
    std::vector<double> s(xs);
    std::sort(s.begin(), s.end());
    const auto quantile = [&](double p) {
        const double h = p * static_cast<double>(s.size() - 1);
        const std::size_t lo = static_cast<std::size_t>(std::floor(h));
        const double frac = h - static_cast<double>(lo);
        if (lo + 1 >= s.size()) return s.back();
        return s[lo] + frac * (s[lo + 1] - s[lo]);
    };
    BoxStats b;
    b.q1 = quantile(0.25);
    b.median = quantile(0.50);
    b.q3 = quantile(0.75);
    const double iqr = b.q3 - b.q1;
    const double lo_fence = b.q1 - 1.5 * iqr;
    const double hi_fence = b.q3 + 1.5 * iqr;
    b.whisker_low = b.q3;
    b.whisker_high = b.q1;
    bool any_inside = false;
    for (double v : s) {
        if (v < lo_fence || v > hi_fence) {
            b.outliers.push_back(v);
        } else {
            if (!any_inside) {
                b.whisker_low = b.whisker_high = v;
                any_inside = true;
            } else {
                b.whisker_low = std::min(b.whisker_low, v);
                b.whisker_high = std::max(b.whisker_high, v);
            }
        }
    }
    return b;
}

double adjusted_mean(const std::vector<double>& xs) {
    if (xs.empty()) throw std::domain_error("adjusted_mean: empty sample");
    const BoxStats b = box_stats(xs);
    double sum = 0.0;
    std::size_t count = 0;
    std::vector<double> outliers(b.outliers);
    for (double v : xs) {
        auto it = std::find(outliers.begin(), outliers.end(), v);
        if (it != outliers.end()) {
            outliers.erase(it);
            continue;
        }
        sum += v;
        ++count;
    }
    if (count == 0) {
        return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
    }
    return sum / static_cast<double>(count);
}

double chi2_sf(double x, int df) {
    if (x < 0.0) throw std::domain_error("chi2_sf: x must be nonnegative");
    if (df < 1) throw std::domain_error("chi2_sf: df must be positive");
    return gamma_q(0.5 * df, 0.5 * x);
}

KruskalWallisResult kruskal_wallis(const std::vector<std::vector<double>>& groups) {
    if (groups.size() < 2) throw std::domain_error("kruskal_wallis: need at least two groups");
    std::vector<double> pooled;
    for (const auto& g : groups) {
        if (g.empty()) throw std::domain_error("kruskal_wallis: empty group");
        pooled.insert(pooled.end(), g.begin(), g.end());
    }
    const double n = static_cast<double>(pooled.size());
    double tie_sum = 0.0;
    const std::vector<double> ranks = ranks_with_ties(pooled, &tie_sum);

    double h = 0.0;
    std::size_t offset = 0;
    for (const auto& g : groups) {
        double rank_sum = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) rank_sum += ranks[offset + i];
        h += rank_sum * rank_sum / static_cast<double>(g.size());
        offset += g.size();
    }
    h = 12.0 / (n * (n + 1.0)) * h - 3.0 * (n + 1.0);

    const double correction = 1.0 - tie_sum / (n * n * n - n);
    if (correction <= 0.0) {
        return {0.0, 1.0};  // every observation tied
    }
    h /= correction;
    if (h < 0.0) h = 0.0;
    const int df = static_cast<int>(groups.size()) - 1;
    return {h, chi2_sf(h, df)};
}

MannWhitneyResult mann_whitney(const std::vector<double>& xs,
                               const std::vector<double>& ys) {
    if (xs.empty() || ys.empty()) throw std::domain_error("mann_whitney: empty sample");
    const double n1 = static_cast<double>(xs.size());
    const double n2 = static_cast<double>(ys.size());
    const double n = n1 + n2;
    const double u = u_statistic(xs, ys);

    // The normal approximation drifts past usable accuracy for tiny samples;
    // fall back to the exact conditional distribution while enumeration stays cheap.
    if (binom(xs.size() + ys.size(), xs.size()) <= 20000.0) {
        return {u, mann_whitney_exact_p(xs, ys)};
    }

    std::vector<double> pooled(xs);
    pooled.insert(pooled.end(), ys.begin(), ys.end());
    double tie_sum = 0.0;
    ranks_with_ties(pooled, &tie_sum);
    const double mu = 0.5 * n1 * n2;
    const double var =
        n1 * n2 / 12.0 * ((n + 1.0) - tie_sum / (n * (n - 1.0)));
    if (var <= 0.0) return {u, 1.0};
    const double z = (std::fabs(u - mu) - 0.5) / std::sqrt(var);
    double p = 2.0 * std_normal_cdf(-std::max(0.0, z));
    if (p > 1.0) p = 1.0;
    return {u, p};
}

Chi2Result chi2_independence(const std::vector<std::vector<double>>& table) {
    const std::size_t r = table.size();
    if (r == 0) throw std::domain_error("chi2_independence: empty table");
    const std::size_t c = table[0].size();
    for (const auto& row : table) {
        if (row.size() != c) throw std::domain_error("chi2_independence: ragged table");
    }
    std::vector<double> row_sum(r, 0.0), col_sum(c, 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < c; ++j) {
            if (table[i][j] < 0.0) throw std::domain_error("chi2_independence: negative count");
            row_sum[i] += table[i][j];
            col_sum[j] += table[i][j];
            total += table[i][j];
        }
    }
    for (double s : row_sum) {
        if (s <= 0.0) throw std::domain_error("chi2_independence: zero row sum");
    }
    for (double s : col_sum) {
        if (s <= 0.0) throw std::domain_error("chi2_independence: zero column sum");
    }
    double chi2 = 0.0;
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < c; ++j) {
            const double expected = row_sum[i] * col_sum[j] / total;
            const double d = table[i][j] - expected;
            chi2 += d * d / expected;
        }
    }
    const int df = static_cast<int>((r - 1) * (c - 1));
    const double p = df > 0 ? chi2_sf(chi2, df) : 1.0;
    return {chi2, df, p};
}

double bonferroni(double p, const AnalysisConfig& cfg) {
    if (p < 0.0 || p > 1.0) throw std::domain_error("bonferroni: p outside [0,1]");
    if (cfg.bonferroni_factor < 1) throw std::domain_error("bonferroni: factor must be >= 1");
    return std::min(1.0, p * cfg.bonferroni_factor);
}

// ---- scored rows -----------------------------------------------------------

std::vector<ScoredRow> scored_rows_from_csv_text(const std::string& text) {
    std::vector<ScoredRow> rows;
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
            ScoredRow r;
            r.participant = f[0];
            r.design = f[1];
            r.task = f[2];
            r.condition = std::stoi(f[3]);
            r.trial_id = f[4];
            r.error = std::stod(f[5]);
            r.confidence = std::stoi(f[6]);
            r.elapsed_ms = std::stod(f[7]);
            if (r.confidence < 1 || r.confidence > 5) {
                throw std::runtime_error("confidence outside 1..5");
            }
            rows.push_back(std::move(r));
        } catch (const std::exception& e) {
            errors += "line " + std::to_string(lineno) + ": " + e.what() + "\n";
        }
    }
    if (!errors.empty()) {
        throw std::runtime_error("scored csv parse errors:\n" + errors);
    }
    return rows;
}

std::vector<ScoredRow> scored_rows_from_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open scored file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return scored_rows_from_csv_text(ss.str());
}

std::string scored_rows_to_csv(const std::vector<ScoredRow>& rows) {
    std::string out = "participant_id,design,task,condition,trial_id,error,confidence,elapsed_ms\n";
    char buf[64];
    for (const ScoredRow& r : rows) {
        out += r.participant + "," + r.design + "," + r.task + "," +
               std::to_string(r.condition) + "," + r.trial_id + ",";
        std::snprintf(buf, sizeof(buf), "%.17g", r.error);
        out += buf;
        out += "," + std::to_string(r.confidence) + ",";
        std::snprintf(buf, sizeof(buf), "%g", r.elapsed_ms);
        out += buf;
        out += "\n";
    }
    return out;
}

// ---- analysis pipeline -----------------------------------------------------

namespace {

std::vector<std::string> designs_in_order(const std::vector<ScoredRow>& rows) {
    std::vector<std::string> designs;
    for (const ScoredRow& r : rows) {
        if (std::find(designs.begin(), designs.end(), r.design) == designs.end()) {
            designs.push_back(r.design);
        }
    }
    return designs;
}

/// Design-by-confidence contingency table over the given rows; confidence
/// levels with no observations are dropped.
std::vector<std::vector<double>> confidence_table(
    const std::vector<const ScoredRow*>& rows, const std::vector<std::string>& designs) {
    std::vector<std::vector<double>> full(designs.size(), std::vector<double>(5, 0.0));
    for (const ScoredRow* r : rows) {
        const auto it = std::find(designs.begin(), designs.end(), r->design);
        full[static_cast<std::size_t>(it - designs.begin())]
            [static_cast<std::size_t>(r->confidence - 1)] += 1.0;
    }
    std::vector<std::size_t> keep_cols;
    for (std::size_t j = 0; j < 5; ++j) {
        double s = 0.0;
        for (const auto& row : full) s += row[j];
        if (s > 0.0) keep_cols.push_back(j);
    }
    std::vector<std::vector<double>> out;
    for (const auto& row : full) {
        std::vector<double> slim;
        for (std::size_t j : keep_cols) slim.push_back(row[j]);
        out.push_back(std::move(slim));
    }
    return out;
}

Chi2Result safe_chi2(const std::vector<std::vector<double>>& table) {
    if (table.size() < 2 || table.empty() || table[0].size() < 2) {
        return {0.0, 0, 1.0};
    }
    try {
        return chi2_independence(table);
    } catch (const std::domain_error&) {
        return {0.0, 0, 1.0};
    }
}

PairwiseMatrix pairwise_mw(const std::vector<std::vector<double>>& groups,
                           const std::vector<std::string>& designs,
                           const AnalysisConfig& cfg) {
    PairwiseMatrix m;
    m.designs = designs;
    m.p.assign(designs.size(), std::vector<double>(designs.size(), 1.0));
    for (std::size_t i = 1; i < groups.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            m.p[i][j] = bonferroni(mann_whitney(groups[i], groups[j]).p, cfg);
        }
    }
    return m;
}

PairwiseMatrix pairwise_conf(const std::vector<const ScoredRow*>& rows,
                             const std::vector<std::string>& designs,
                             const AnalysisConfig& cfg) {
    PairwiseMatrix m;
    m.designs = designs;
    m.p.assign(designs.size(), std::vector<double>(designs.size(), 1.0));
    for (std::size_t i = 1; i < designs.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            std::vector<const ScoredRow*> pair_rows;
            for (const ScoredRow* r : rows) {
                if (r->design == designs[i] || r->design == designs[j]) {
                    pair_rows.push_back(r);
                }
            }
            const auto table =
                confidence_table(pair_rows, {designs[j], designs[i]});
            m.p[i][j] = bonferroni(safe_chi2(table).p, cfg);
        }
    }
    return m;
}

}  // namespace

AnalysisReport analyze(const std::vector<ScoredRow>& rows, const AnalysisConfig& cfg) {
    if (rows.empty()) throw std::domain_error("analyze: no responses");
    if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) {
        throw std::domain_error("analyze: alpha outside (0,1)");
    }
    AnalysisReport report;
    const std::vector<std::string> designs = designs_in_order(rows);

    for (const std::string& design : designs) {
        DesignSummary s;
        s.design = design;
        std::vector<double> errors, times;
        double conf_sum = 0.0;
        for (const ScoredRow& r : rows) {
            if (r.design != design) continue;
            errors.push_back(r.error);
            times.push_back(r.elapsed_ms);
            conf_sum += r.confidence;
            ++s.n;
        }
        s.error_box = box_stats(errors);
        s.error_adjusted_mean = adjusted_mean(errors);
        s.time_adjusted_mean = adjusted_mean(times);
        s.mean_confidence = conf_sum / s.n;
        report.summaries.push_back(std::move(s));
    }

    std::vector<std::string> tasks;
    for (const ScoredRow& r : rows) {
        if (std::find(tasks.begin(), tasks.end(), r.task) == tasks.end()) {
            tasks.push_back(r.task);
        }
    }

    for (const std::string& task : tasks) {
        TaskAnalysis ta;
        ta.task = task;
        std::vector<const ScoredRow*> task_rows;
        for (const ScoredRow& r : rows) {
            if (r.task == task) task_rows.push_back(&r);
        }
        std::vector<std::vector<double>> error_groups, time_groups;
        std::vector<std::string> present;
        for (const std::string& design : designs) {
            std::vector<double> e, t;
            for (const ScoredRow* r : task_rows) {
                if (r->design != design) continue;
                e.push_back(r->error);
                t.push_back(r->elapsed_ms);
            }
            if (!e.empty()) {
                error_groups.push_back(std::move(e));
                time_groups.push_back(std::move(t));
                present.push_back(design);
            }
        }
        if (error_groups.size() >= 2) {
            const auto kw_e = kruskal_wallis(error_groups);
            ta.error_H = kw_e.H;
            ta.error_p = kw_e.p;
            const auto kw_t = kruskal_wallis(time_groups);
            ta.time_H = kw_t.H;
            ta.time_p = kw_t.p;
            const auto chi = safe_chi2(confidence_table(task_rows, present));
            ta.confidence_chi2 = chi.chi2;
            ta.confidence_df = chi.df;
            ta.confidence_p = chi.p;

            if (ta.error_p < cfg.alpha) {
                ta.error_pairwise = pairwise_mw(error_groups, present, cfg);
            }
            if (ta.time_p < cfg.alpha) {
                ta.time_pairwise = pairwise_mw(time_groups, present, cfg);
            }
            if (ta.confidence_p < cfg.alpha) {
                ta.confidence_pairwise = pairwise_conf(task_rows, present, cfg);
            }
        }
        report.tasks.push_back(std::move(ta));
    }
    return report;
}

namespace {

nlohmann::json matrix_json(const PairwiseMatrix& m) {
    nlohmann::json j;
    j["designs"] = m.designs;
    nlohmann::json cells = nlohmann::json::array();
    for (std::size_t i = 1; i < m.designs.size(); ++i) {
        for (std::size_t j2 = 0; j2 < i; ++j2) {
            cells.push_back({{"a", m.designs[i]}, {"b", m.designs[j2]}, {"p", m.p[i][j2]}});
        }
    }
    j["cells"] = cells;
    return j;
}

void append_triangle(std::string& out, const std::string& title, const PairwiseMatrix& m) {
    out += title + "\n";
    char buf[32];
    out += "p-value";
    for (const auto& d : m.designs) out += "\t" + d;
    out += "\n";
    for (std::size_t i = 0; i < m.designs.size(); ++i) {
        out += m.designs[i];
        for (std::size_t j = 0; j < m.designs.size(); ++j) {
            if (j < i) {
                std::snprintf(buf, sizeof(buf), "%.3f", m.p[i][j]);
                out += "\t";
                out += buf;
            } else if (j == i) {
                out += "\t-";
            } else {
                out += "\t";
            }
        }
        out += "\n";
    }
    out += "\n";
}

}  // namespace

std::string report_to_json(const AnalysisReport& report) {
    nlohmann::json j;
    j["designs"] = nlohmann::json::array();
    for (const DesignSummary& s : report.summaries) {
        nlohmann::json d;
        d["design"] = s.design;
        d["n"] = s.n;
        d["error"] = {{"q1", s.error_box.q1},
                      {"median", s.error_box.median},
                      {"q3", s.error_box.q3},
                      {"whisker_low", s.error_box.whisker_low},
                      {"whisker_high", s.error_box.whisker_high},
                      {"outliers", s.error_box.outliers},
                      {"adjusted_mean", s.error_adjusted_mean}};
        d["mean_confidence"] = s.mean_confidence;
        d["time_adjusted_mean"] = s.time_adjusted_mean;
        j["designs"].push_back(d);
    }
    j["tasks"] = nlohmann::json::array();
    for (const TaskAnalysis& t : report.tasks) {
        nlohmann::json d;
        d["task"] = t.task;
        d["omnibus"] = {{"error", {{"H", t.error_H}, {"p", t.error_p}}},
                        {"time", {{"H", t.time_H}, {"p", t.time_p}}},
                        {"confidence",
                         {{"chi2", t.confidence_chi2},
                          {"df", t.confidence_df},
                          {"p", t.confidence_p}}}};
        if (t.error_pairwise) d["error_pairwise"] = matrix_json(*t.error_pairwise);
        if (t.time_pairwise) d["time_pairwise"] = matrix_json(*t.time_pairwise);
        if (t.confidence_pairwise) {
            d["confidence_pairwise"] = matrix_json(*t.confidence_pairwise);
        }
        j["tasks"].push_back(d);
    }
    return j.dump(2) + "\n";
}

std::string report_triangle_text(const AnalysisReport& report) {
    std::string out;
    for (const TaskAnalysis& t : report.tasks) {
        if (t.error_pairwise) append_triangle(out, t.task + " / error", *t.error_pairwise);
        if (t.time_pairwise) append_triangle(out, t.task + " / time", *t.time_pairwise);
        if (t.confidence_pairwise) {
            append_triangle(out, t.task + " / confidence", *t.confidence_pairwise);
        }
    }
    if (out.empty()) out = "no significant omnibus effects; no post-hoc matrices\n";
    return out;
}

}  // namespace omviz::stats
