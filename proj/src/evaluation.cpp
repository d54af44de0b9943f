#include "grn/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "grn/csv.hpp"
#include "grn/error.hpp"

namespace grn {

void SignedAdjacency::validate() const {
  const auto n = static_cast<Eigen::Index>(gene_names.size());
  if (matrix.rows() != n || matrix.cols() != n) throw DataError("adjacency shape does not match its gene names");
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const int v = matrix(i, j);
      if (v < -1 || v > 1) throw DataError("adjacency entries must be -1, 0 or +1");
    }
  }
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw DataError("quantile of an empty set");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const double frac = pos - static_cast<double>(lo);
  if (frac == 0.0 || lo + 1 >= values.size()) return values[lo];
  return values[lo] + frac * (values[lo + 1] - values[lo]);
}

Quartiles weight_quartiles(const Eigen::MatrixXd& weights) {
  std::vector<double> flat(weights.data(), weights.data() + weights.size());
  return {quantile(flat, 0.25), quantile(flat, 0.75)};
}

SignedAdjacency discretize_iqr(const std::vector<std::string>& names, const Eigen::MatrixXd& weights) {
  if (!weights.allFinite()) throw DataError("cannot discretize non-finite weights");
  if (weights.rows() != weights.cols() || static_cast<std::size_t>(weights.rows()) != names.size()) {
    throw DataError("weight matrix must be square and match the gene names");
  }
  const Quartiles q = weight_quartiles(weights);
  SignedAdjacency a;
  a.gene_names = names;
  a.matrix = Eigen::MatrixXi::Zero(weights.rows(), weights.cols());
  for (Eigen::Index i = 0; i < weights.rows(); ++i) {
    for (Eigen::Index j = 0; j < weights.cols(); ++j) {
      const double w = weights(i, j);
      if (w < q.q1) a.matrix(i, j) = -1;
      else if (w > q.q3) a.matrix(i, j) = 1;
    }
  }
  return a;
}

namespace {

std::optional<double> ratio(long num, long den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

std::optional<double> diff(const std::optional<double>& a, const std::optional<double>& b) {
  if (!a || !b) return std::nullopt;
  return *b - *a;
}

std::string metric_text(const std::optional<double>& v) {
  return v ? csv::format_fixed(*v, 4) : std::string(undefined_marker);
}

}  // namespace

EvalReport report_from_counts(const ConfusionCounts& c) {
  EvalReport r;
  r.counts = c;
  r.sensitivity = ratio(c.tp, c.tp + c.fn);
  r.specificity = ratio(c.tn, c.tn + c.fp);
  r.precision = ratio(c.tp, c.tp + c.fp);
  r.recall = r.sensitivity;
  if (r.precision && r.recall && *r.precision + *r.recall > 0.0) {
    r.f_score = 2.0 * *r.precision * *r.recall / (*r.precision + *r.recall);
  }
  return r;
}

EvalReport score(const SignedAdjacency& pred, const GoldNetwork& gold, ScoreMode mode) {
  pred.validate();
  const std::size_t n = pred.gene_names.size();
  std::unordered_map<std::string, Eigen::Index> index;
  for (std::size_t i = 0; i < n; ++i) index.emplace(pred.gene_names[i], static_cast<Eigen::Index>(i));
  if (gold.gene_names.size() != n) throw DataError("prediction and gold networks have different gene sets");
  for (const auto& g : gold.gene_names) {
    if (!index.count(g)) throw DataError("gold gene '" + g + "' is not in the prediction");
  }

  // gold_sign(target, regulator): 0 = no edge, 2 = unsigned edge, else the sign.
  Eigen::MatrixXi gold_sign = Eigen::MatrixXi::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (const auto& e : gold.edges) {
    const auto reg = index.find(e.regulator);
    const auto tgt = index.find(e.target);
    if (reg == index.end()) throw DataError("gold edge references unknown gene '" + e.regulator + "'");
    if (tgt == index.end()) throw DataError("gold edge references unknown gene '" + e.target + "'");
    gold_sign(tgt->second, reg->second) = e.sign == EdgeSign::unsigned_edge ? 2 : static_cast<int>(e.sign);
  }

  ConfusionCounts c;
  for (Eigen::Index i = 0; i < gold_sign.rows(); ++i) {
    for (Eigen::Index j = 0; j < gold_sign.cols(); ++j) {
      const int p = pred.matrix(i, j);
      const int g = gold_sign(i, j);
      if (p != 0 && g != 0) {
        if (mode == ScoreMode::signed_edges && g != 2 && p != g) {
          ++c.fp;
          ++c.fn;
        } else {
          ++c.tp;
        }
      } else if (p != 0) {
        ++c.fp;
      } else if (g != 0) {
        ++c.fn;
      } else {
        ++c.tn;
      }
    }
  }
  return report_from_counts(c);
}

ReportDelta compare_reports(const EvalReport& a, const EvalReport& b) {
  return {diff(a.sensitivity, b.sensitivity), diff(a.specificity, b.specificity), diff(a.precision, b.precision),
          diff(a.recall, b.recall), diff(a.f_score, b.f_score)};
}

std::string format_report(const EvalReport& r) {
  std::string out;
  out += "tp=" + std::to_string(r.counts.tp) + '\n';
  out += "fp=" + std::to_string(r.counts.fp) + '\n';
  out += "fn=" + std::to_string(r.counts.fn) + '\n';
  out += "tn=" + std::to_string(r.counts.tn) + '\n';
  out += "sensitivity=" + metric_text(r.sensitivity) + '\n';
  out += "specificity=" + metric_text(r.specificity) + '\n';
  out += "precision=" + metric_text(r.precision) + '\n';
  out += "recall=" + metric_text(r.recall) + '\n';
  out += "f_score=" + metric_text(r.f_score) + '\n';
  return out;
}

std::string report_csv_header() { return "tp,fp,fn,tn,sensitivity,specificity,precision,recall,f_score"; }

std::string report_csv_row(const EvalReport& r) {
  return std::to_string(r.counts.tp) + ',' + std::to_string(r.counts.fp) + ',' + std::to_string(r.counts.fn) +
         ',' + std::to_string(r.counts.tn) + ',' + metric_text(r.sensitivity) + ',' + metric_text(r.specificity) +
         ',' + metric_text(r.precision) + ',' + metric_text(r.recall) + ',' + metric_text(r.f_score);
}

std::string format_sif(const SignedAdjacency& a, bool signed_relations) {
  a.validate();
  std::string out;
  // Row i is the target, column j the regulator.
  for (Eigen::Index i = 0; i < a.matrix.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.matrix.cols(); ++j) {
      const int v = a.matrix(i, j);
      if (v == 0) continue;
      const char* rel = !signed_relations ? "regulates" : v > 0 ? "activates" : "inhibits";
      out += a.gene_names[static_cast<std::size_t>(j)] + '\t' + rel + '\t' +
             a.gene_names[static_cast<std::size_t>(i)] + '\n';
    }
  }
  return out;
}

std::string format_adjacency_csv(const SignedAdjacency& a) {
  std::string out = "gene";
  for (const auto& n : a.gene_names) out += "," + n;
  out += '\n';
  for (Eigen::Index i = 0; i < a.matrix.rows(); ++i) {
    out += a.gene_names[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < a.matrix.cols(); ++j) out += "," + std::to_string(a.matrix(i, j));
    out += '\n';
  }
  return out;
}

SignedAdjacency parse_adjacency_csv(const std::string& text, const std::string& source) {
  const auto rows = csv::parse(text);
  if (rows.empty() || rows.front().cells.front() != "gene") throw DataError(source + ":1:1: expected 'gene' header");
  SignedAdjacency a;
  a.gene_names.assign(rows.front().cells.begin() + 1, rows.front().cells.end());
  const auto n = static_cast<Eigen::Index>(a.gene_names.size());
  if (rows.size() != a.gene_names.size() + 1) throw DataError(source + ": adjacency must be square");
  a.matrix.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& r = rows[static_cast<std::size_t>(i) + 1];
    const std::string where = source + ":" + std::to_string(r.line);
    if (static_cast<Eigen::Index>(r.cells.size()) != n + 1 || r.cells.front() != a.gene_names[static_cast<std::size_t>(i)]) {
      throw DataError(where + ": row does not match the header");
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      const std::string& cell = r.cells[static_cast<std::size_t>(j) + 1];
      if (cell == "-1") a.matrix(i, j) = -1;
      else if (cell == "0") a.matrix(i, j) = 0;
      else if (cell == "1" || cell == "+1") a.matrix(i, j) = 1;
      else throw DataError(where + ":" + std::to_string(j + 2) + ": expected -1, 0 or 1, got '" + cell + "'");
    }
  }
  return a;
}

double random_expected_f_score(long predicted, long gold, long universe) {
  if (universe <= 0 || predicted + gold == 0) return 0.0;
  const double expected_tp = static_cast<double>(predicted) * static_cast<double>(gold) / static_cast<double>(universe);
  return 2.0 * expected_tp / static_cast<double>(predicted + gold);
}

double random_expected_sensitivity(long predicted, long universe) {
  if (universe <= 0) return 0.0;
  return static_cast<double>(predicted) / static_cast<double>(universe);
}

std::string to_string(ScoreMode m) { return m == ScoreMode::signed_edges ? "signed" : "unsigned"; }

ScoreMode parse_score_mode(const std::string& s) {
  if (s == "signed") return ScoreMode::signed_edges;
  if (s == "unsigned") return ScoreMode::unsigned_edges;
  throw DataError("unknown score mode '" + s + "' (expected signed or unsigned)");
}

}  // namespace grn
