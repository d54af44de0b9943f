#include "grn/data.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "grn/csv.hpp"
#include "grn/error.hpp"
#include "grn/random.hpp"

namespace grn {

namespace {

std::string at(const std::string& source, std::size_t line, std::size_t column) {
  return source + ":" + std::to_string(line) + ":" + std::to_string(column);
}

struct Table {
  std::vector<std::string> row_names;
  std::vector<double> header;
  Eigen::MatrixXd values;
};

// Shared reader for the "<first_cell>,t0,t1,..." layouts.
Table parse_table(const std::string& text, const std::string& source,
                  const std::string& first_cell) {
  const auto rows = csv::parse(text);
  if (rows.empty()) throw DataError(source + ": empty file");

  const auto& head = rows.front();
  if (head.cells.front() != first_cell) {
    throw DataError(at(source, head.line, 1) + ": expected '" + first_cell + "' in the first cell, got '" +
                    head.cells.front() + "'");
  }
  Table t;
  for (std::size_t c = 1; c < head.cells.size(); ++c) {
    const double tp = csv::parse_number(head.cells[c], at(source, head.line, c + 1));
    if (!t.header.empty() && !(tp > t.header.back())) {
      throw DataError(at(source, head.line, c + 1) + ": time points must be strictly increasing");
    }
    t.header.push_back(tp);
  }
  if (t.header.size() < 2) throw DataError(at(source, head.line, 1) + ": need at least 2 time points");

  const std::size_t cols = t.header.size();
  t.values.resize(static_cast<Eigen::Index>(rows.size() - 1), static_cast<Eigen::Index>(cols));
  std::unordered_map<std::string, std::size_t> seen;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    const std::string& name = row.cells.front();
    if (name.empty()) throw DataError(at(source, row.line, 1) + ": empty name");
    if (auto it = seen.find(name); it != seen.end()) {
      throw DataError(at(source, row.line, 1) + ": duplicate name '" + name + "' (first on line " +
                      std::to_string(it->second) + ")");
    }
    seen.emplace(name, row.line);
    if (row.cells.size() != cols + 1) {
      throw DataError(at(source, row.line, 1) + ": expected " + std::to_string(cols + 1) + " cells, found " +
                      std::to_string(row.cells.size()));
    }
    for (std::size_t c = 0; c < cols; ++c) {
      t.values(static_cast<Eigen::Index>(r - 1), static_cast<Eigen::Index>(c)) =
          csv::parse_number(row.cells[c + 1], at(source, row.line, c + 2));
    }
    t.row_names.push_back(name);
  }
  if (t.row_names.empty()) throw DataError(source + ": no data rows");
  return t;
}

std::string format_table(const std::string& first_cell, const std::vector<std::string>& names,
                         const std::vector<double>& header, const Eigen::MatrixXd& values) {
  std::string out = first_cell;
  for (double tp : header) out += "," + csv::format_number(tp);
  out += '\n';
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    out += names[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < values.cols(); ++j) out += "," + csv::format_number(values(i, j));
    out += '\n';
  }
  return out;
}

}  // namespace

void ExpressionDataset::validate() const {
  if (gene_names.empty()) throw DataError("dataset has no genes");
  std::unordered_set<std::string> unique;
  for (const auto& g : gene_names) {
    if (g.empty()) throw DataError("dataset has an empty gene name");
    if (!unique.insert(g).second) throw DataError("duplicate gene name '" + g + "'");
  }
  if (time_points.size() < 2) throw DataError("dataset needs at least 2 time points");
  for (std::size_t t = 1; t < time_points.size(); ++t) {
    if (!(time_points[t] > time_points[t - 1])) throw DataError("time points must be strictly increasing");
  }
  if (values.rows() != static_cast<Eigen::Index>(genes()) ||
      values.cols() != static_cast<Eigen::Index>(times())) {
    throw DataError("value matrix shape does not match gene/time counts");
  }
  if (!values.allFinite()) throw DataError("dataset contains non-finite values");
  if (normalized && (values.minCoeff() < 0.0 || values.maxCoeff() > 1.0)) {
    throw DataError("normalized dataset has values outside [0, 1]");
  }
  if (external) {
    if (external->values.rows() != static_cast<Eigen::Index>(external->names.size()) ||
        external->values.cols() != static_cast<Eigen::Index>(times())) {
      throw DataError("external input matrix shape does not match input/time counts");
    }
  }
}

void GoldNetwork::validate() const {
  std::unordered_set<std::string> names(gene_names.begin(), gene_names.end());
  std::set<std::pair<std::string, std::string>> pairs;
  for (const auto& e : edges) {
    if (!names.count(e.regulator)) throw DataError("gold edge references unknown gene '" + e.regulator + "'");
    if (!names.count(e.target)) throw DataError("gold edge references unknown gene '" + e.target + "'");
    if (!pairs.emplace(e.regulator, e.target).second) {
      throw DataError("duplicate gold edge " + e.regulator + " -> " + e.target);
    }
  }
}

ExpressionDataset parse_dataset(const std::string& text, const std::string& source,
                                const LoadOptions& options) {
  Table t = parse_table(text, source, options.first_cell);
  ExpressionDataset d;
  d.gene_names = std::move(t.row_names);
  d.time_points = std::move(t.header);
  d.values = std::move(t.values);
  d.normalized = false;
  return d;
}

ExpressionDataset load_dataset(const std::string& path, const LoadOptions& options) {
  return parse_dataset(csv::read_file(path), path, options);
}

std::string format_dataset(const ExpressionDataset& d) {
  return format_table("gene", d.gene_names, d.time_points, d.values);
}

void save_dataset(const std::string& path, const ExpressionDataset& d) {
  csv::write_file(path, format_dataset(d));
}

void attach_external_inputs(ExpressionDataset& d, const std::string& path) {
  Table t = parse_table(csv::read_file(path), path, "input");
  if (t.header != d.time_points) {
    throw DataError(path + ": input time points do not match the expression data");
  }
  d.external = ExternalInputs{std::move(t.row_names), std::move(t.values)};
}

std::string format_external_inputs(const ExpressionDataset& d) {
  if (!d.external) return {};
  return format_table("input", d.external->names, d.time_points, d.external->values);
}

ExpressionDataset normalize(const ExpressionDataset& d) {
  if (d.times() < 2) throw DataError("normalize needs at least 2 time points");
  ExpressionDataset out = d;
  for (Eigen::Index i = 0; i < out.values.rows(); ++i) {
    auto row = out.values.row(i);
    const double lo = row.minCoeff();
    const double hi = row.maxCoeff();
    if (hi == lo) {
      row.setConstant(0.5);
      continue;
    }
    const double span = hi - lo;
    for (Eigen::Index j = 0; j < row.size(); ++j) {
      // Pin the extremes so a second pass reproduces them exactly.
      if (row(j) == lo) row(j) = 0.0;
      else if (row(j) == hi) row(j) = 1.0;
      else row(j) = (row(j) - lo) / span;
    }
  }
  out.normalized = true;
  return out;
}

ExpressionDataset add_gaussian_noise(const ExpressionDataset& d, double level, std::uint64_t seed) {
  if (!(level >= 0.0)) throw DataError("noise level must be >= 0");
  if (!d.normalized) throw DataError("noise is applied to normalized data only");
  ExpressionDataset out = d;
  if (level == 0.0) return out;
  auto eng = make_engine(seed, Stream::noise);
  for (Eigen::Index i = 0; i < d.values.rows(); ++i) {
    const double sigma = level * (d.values.row(i).maxCoeff() - d.values.row(i).minCoeff());
    for (Eigen::Index j = 0; j < d.values.cols(); ++j) {
      const double noisy = d.values(i, j) + sigma * standard_normal(eng);
      out.values(i, j) = std::clamp(noisy, 0.0, 1.0);
    }
  }
  return out;
}

GoldNetwork parse_gold(const std::string& text, const std::string& source,
                       const std::vector<std::string>& gene_names) {
  GoldNetwork gold;
  gold.gene_names = gene_names;
  std::unordered_set<std::string> names(gene_names.begin(), gene_names.end());
  std::set<std::pair<std::string, std::string>> pairs;
  for (const auto& row : csv::parse(text, '\t')) {
    if (row.cells.front().starts_with('#')) continue;
    const std::string where = source + ":" + std::to_string(row.line);
    if (row.cells.size() != 3) throw DataError(where + ": expected regulator<TAB>target<TAB>sign");
    GoldEdge e{row.cells[0], row.cells[1], EdgeSign::unsigned_edge};
    const std::string& sign = row.cells[2];
    if (sign == "+1" || sign == "1" || sign == "+") e.sign = EdgeSign::activates;
    else if (sign == "-1" || sign == "-") e.sign = EdgeSign::inhibits;
    else if (sign == "?") e.sign = EdgeSign::unsigned_edge;
    else throw DataError(where + ": bad sign '" + sign + "'");
    for (const auto* g : {&e.regulator, &e.target}) {
      if (!names.count(*g)) throw DataError(where + ": unknown gene '" + *g + "'");
    }
    if (!pairs.emplace(e.regulator, e.target).second) {
      throw DataError(where + ": duplicate edge " + e.regulator + " -> " + e.target);
    }
    gold.edges.push_back(std::move(e));
  }
  return gold;
}

GoldNetwork load_gold(const std::string& path, const std::vector<std::string>& gene_names) {
  return parse_gold(csv::read_file(path), path, gene_names);
}

std::string format_gold(const GoldNetwork& gold) {
  std::string out;
  for (const auto& e : gold.edges) {
    const char* sign = e.sign == EdgeSign::activates ? "+1" : e.sign == EdgeSign::inhibits ? "-1" : "?";
    out += e.regulator + '\t' + e.target + '\t' + sign + '\n';
  }
  return out;
}

void save_gold(const std::string& path, const GoldNetwork& gold) {
  csv::write_file(path, format_gold(gold));
}

std::uint64_t dataset_hash(const ExpressionDataset& d) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](const void* p, std::size_t n) {
    const auto* b = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= b[i];
      h *= 0x100000001b3ULL;
    }
  };
  for (const auto& g : d.gene_names) mix(g.data(), g.size() + 1);
  mix(d.time_points.data(), d.time_points.size() * sizeof(double));
  for (Eigen::Index j = 0; j < d.values.cols(); ++j) {
    for (Eigen::Index i = 0; i < d.values.rows(); ++i) {
      const double v = d.values(i, j);
      mix(&v, sizeof v);
    }
  }
  return h;
}

}  // namespace grn
