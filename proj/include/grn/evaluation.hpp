#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "grn/data.hpp"

namespace grn {

/// Ternary interaction matrix; entry (i, j) is the effect of gene j on gene i.
struct SignedAdjacency {
  std::vector<std::string> gene_names;
  Eigen::MatrixXi matrix;

  void validate() const;
};

struct Quartiles {
  double q1 = 0.0;
  double q3 = 0.0;
};

/// Linear-interpolation quantile at position q * (N - 1) of the sorted values.
double quantile(std::vector<double> values, double q);

Quartiles weight_quartiles(const Eigen::MatrixXd& weights);

/// Below Q1 -> -1, above Q3 -> +1, anything else (including ties) -> 0.
SignedAdjacency discretize_iqr(const std::vector<std::string>& names,
                               const Eigen::MatrixXd& weights);

enum class ScoreMode { unsigned_edges, signed_edges };

struct ConfusionCounts {
  long tp = 0;
  long fp = 0;
  long fn = 0;
  long tn = 0;

  long total() const { return tp + fp + fn + tn; }
};

/// Metrics are empty when their ratio is 0/0.
struct EvalReport {
  ConfusionCounts counts;
  std::optional<double> sensitivity;
  std::optional<double> specificity;
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> f_score;
};

/// Metrics from counts alone.
EvalReport report_from_counts(const ConfusionCounts& c);

/// Scores over all n^2 ordered pairs, self-loops included. In signed mode a
/// nonzero prediction with the wrong sign on a gold edge is both an FP and
/// an FN. Throws DataError when the gene sets differ.
EvalReport score(const SignedAdjacency& pred, const GoldNetwork& gold,
                 ScoreMode mode = ScoreMode::unsigned_edges);

struct ReportDelta {
  std::optional<double> sensitivity;
  std::optional<double> specificity;
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> f_score;
};

/// Per-metric b - a; empty where either side is undefined.
ReportDelta compare_reports(const EvalReport& a, const EvalReport& b);

inline constexpr const char* undefined_marker = "NA";

/// key=value lines, metrics to 4 decimals, counts raw.
std::string format_report(const EvalReport& r);
std::string report_csv_header();
std::string report_csv_row(const EvalReport& r);

/// "regulator<TAB>relation<TAB>target" per nonzero entry, relation one of
/// activates / inhibits, or regulates when `signed_relations` is false.
std::string format_sif(const SignedAdjacency& a, bool signed_relations = true);
std::string format_adjacency_csv(const SignedAdjacency& a);
SignedAdjacency parse_adjacency_csv(const std::string& text, const std::string& source);

/// Expected F-score of a uniformly random prediction with `predicted` edges
/// in a universe of `universe` pairs containing `gold` true edges. F is
/// linear in TP for fixed cardinalities, so this is exact given the
/// hypergeometric mean E[TP] = predicted * gold / universe.
double random_expected_f_score(long predicted, long gold, long universe);
double random_expected_sensitivity(long predicted, long universe);

std::string to_string(ScoreMode m);
ScoreMode parse_score_mode(const std::string& s);

}  // namespace grn
