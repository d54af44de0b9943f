#include "grn/model.hpp"

#include <cmath>

#include "grn/csv.hpp"
#include "grn/error.hpp"

namespace grn {

namespace {

void require_length(const Eigen::VectorXd& v, std::size_t n, const char* what) {
  if (static_cast<std::size_t>(v.size()) != n) {
    throw DataError(std::string(what) + " has length " + std::to_string(v.size()) + ", expected " +
                    std::to_string(n));
  }
}

std::vector<std::string> default_names(const char* prefix, std::size_t n) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back(prefix + std::to_string(i + 1));
  return names;
}

}  // namespace

GrnModel GrnModel::zeros(std::size_t n, std::size_t k_ext) {
  const auto rows = static_cast<Eigen::Index>(n);
  GrnModel m;
  m.gene_names = default_names("G", n);
  m.input_names = default_names("U", k_ext);
  m.weights = Eigen::MatrixXd::Zero(rows, rows);
  m.external = Eigen::MatrixXd::Zero(rows, static_cast<Eigen::Index>(k_ext));
  m.bias = Eigen::VectorXd::Zero(rows);
  m.tau = Eigen::VectorXd::Ones(rows);
  m.decay = Eigen::VectorXd::Ones(rows);
  return m;
}

Eigen::VectorXd GrnModel::gene_params(std::size_t i) const {
  const auto n = static_cast<Eigen::Index>(genes());
  const auto k = static_cast<Eigen::Index>(inputs());
  const auto row = static_cast<Eigen::Index>(i);
  Eigen::VectorXd theta(n + k + 1);
  theta.head(n) = weights.row(row).transpose();
  theta.segment(n, k) = external.row(row).transpose();
  theta(n + k) = bias(row);
  return theta;
}

void GrnModel::set_gene_params(std::size_t i, const Eigen::VectorXd& theta) {
  const auto n = static_cast<Eigen::Index>(genes());
  const auto k = static_cast<Eigen::Index>(inputs());
  const auto row = static_cast<Eigen::Index>(i);
  require_length(theta, params_per_gene(), "parameter block");
  weights.row(row) = theta.head(n).transpose();
  external.row(row) = theta.segment(n, k).transpose();
  bias(row) = theta(n + k);
}

void GrnModel::validate() const {
  const std::size_t n = genes();
  if (weights.cols() != weights.rows()) throw DataError("weight matrix is not square");
  if (gene_names.size() != n) throw DataError("gene name count does not match the weight matrix");
  if (static_cast<std::size_t>(external.rows()) != n) throw DataError("external weight rows do not match gene count");
  if (input_names.size() != inputs()) throw DataError("input name count does not match external weights");
  require_length(bias, n, "bias");
  require_length(tau, n, "tau");
  require_length(decay, n, "lambda");
  if (!weights.allFinite() || !external.allFinite() || !bias.allFinite()) {
    throw DataError("model parameters must be finite");
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    if (!(tau(r) > 0.0) || !std::isfinite(tau(r))) throw DataError("tau must be positive for gene " + gene_names[i]);
    if (!(decay(r) >= 0.0) || !std::isfinite(decay(r))) {
      throw DataError("lambda must be non-negative for gene " + gene_names[i]);
    }
  }
}

void validate_step(const GrnModel& m, const StepConfig& cfg) {
  if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) throw DataError("dt must be positive");
  for (Eigen::Index i = 0; i < m.tau.size(); ++i) {
    if (cfg.dt > m.tau(i)) {
      throw DataError("dt exceeds tau for gene " + m.gene_names[static_cast<std::size_t>(i)]);
    }
  }
}

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double ez = std::exp(z);
  return ez / (1.0 + ez);
}

double transfer(Transfer t, double z) {
  return t == Transfer::sigmoid ? sigmoid(z) : z;
}

double transfer_derivative(Transfer t, double z) {
  if (t == Transfer::identity) return 1.0;
  const double s = sigmoid(z);
  return s * (1.0 - s);
}

Eigen::VectorXd net_input(const GrnModel& m, const Eigen::VectorXd& e, const Eigen::VectorXd& u) {
  require_length(e, m.genes(), "state vector");
  Eigen::VectorXd net = m.weights * e + m.bias;
  if (m.inputs() > 0) {
    require_length(u, m.inputs(), "external input vector");
    net.noalias() += m.external * u;
  }
  return net;
}

Eigen::VectorXd step(const GrnModel& m, const Eigen::VectorXd& e, const Eigen::VectorXd& u,
                     const StepConfig& cfg) {
  const Eigen::VectorXd net = net_input(m, e, u);
  Eigen::VectorXd out(e.size());
  for (Eigen::Index i = 0; i < e.size(); ++i) {
    const double rate = cfg.dt / m.tau(i);
    out(i) = rate * transfer(cfg.transfer, net(i)) + (1.0 - m.decay(i) * rate) * e(i);
  }
  return out;
}

Eigen::VectorXd input_column(const ExpressionDataset& d, std::size_t t) {
  if (!d.external) return {};
  return d.external->values.col(static_cast<Eigen::Index>(t));
}

Eigen::MatrixXd rollout(const GrnModel& m, const Eigen::VectorXd& e0, const Eigen::MatrixXd& inputs,
                        std::size_t steps, const StepConfig& cfg) {
  if (steps < 1) throw DataError("rollout needs at least one step");
  if (m.inputs() > 0 && static_cast<std::size_t>(inputs.cols()) < steps) {
    throw DataError("external input series has " + std::to_string(inputs.cols()) + " columns, need " +
                    std::to_string(steps));
  }
  require_length(e0, m.genes(), "initial state");
  Eigen::MatrixXd traj(e0.size(), static_cast<Eigen::Index>(steps + 1));
  traj.col(0) = e0;
  const Eigen::VectorXd no_input;
  for (std::size_t t = 0; t < steps; ++t) {
    const auto c = static_cast<Eigen::Index>(t);
    const Eigen::VectorXd u = m.inputs() > 0 ? Eigen::VectorXd(inputs.col(c)) : no_input;
    traj.col(c + 1) = step(m, traj.col(c), u, cfg);
  }
  return traj;
}

std::vector<double> interval_steps(const ExpressionDataset& d, const StepConfig& cfg) {
  const std::size_t intervals = d.times() - 1;
  std::vector<double> spacing(intervals);
  for (std::size_t k = 0; k < intervals; ++k) spacing[k] = d.time_points[k + 1] - d.time_points[k];
  const double mean = (d.time_points.back() - d.time_points.front()) / static_cast<double>(intervals);
  bool uniform = true;
  for (double h : spacing) uniform = uniform && std::abs(h - mean) <= 1e-9 * std::abs(mean);
  std::vector<double> dts(intervals, cfg.dt);
  if (!uniform) {
    for (std::size_t k = 0; k < intervals; ++k) dts[k] = cfg.dt * spacing[k] / mean;
  }
  return dts;
}

Eigen::MatrixXd one_step_predictions(const GrnModel& m, const ExpressionDataset& d,
                                     const StepConfig& cfg) {
  if (d.times() < 2) throw DataError("one-step predictions need at least 2 time points");
  if (static_cast<std::size_t>(d.values.rows()) != m.genes()) {
    throw DataError("dataset gene count does not match the model");
  }
  const auto dts = interval_steps(d, cfg);
  Eigen::MatrixXd pred(d.values.rows(), d.values.cols() - 1);
  StepConfig local = cfg;
  for (std::size_t t = 0; t + 1 < d.times(); ++t) {
    local.dt = dts[t];
    const auto c = static_cast<Eigen::Index>(t);
    pred.col(c) = step(m, d.values.col(c), input_column(d, t), local);
  }
  return pred;
}

// ---------------------------------------------------------------------------
// Files

namespace {

void append_block(std::string& out, const std::string& tag, const std::vector<std::string>& col_names,
                  const std::vector<std::string>& row_names, const Eigen::MatrixXd& block) {
  out += tag;
  for (const auto& c : col_names) out += "," + c;
  out += '\n';
  for (Eigen::Index i = 0; i < block.rows(); ++i) {
    out += row_names[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < block.cols(); ++j) out += "," + csv::format_number(block(i, j));
    out += '\n';
  }
}

}  // namespace

std::string format_model(const GrnModel& m) {
  std::string out;
  append_block(out, "[weights]", m.gene_names, m.gene_names, m.weights);
  if (m.inputs() > 0) append_block(out, "[external]", m.input_names, m.gene_names, m.external);
  Eigen::MatrixXd params(static_cast<Eigen::Index>(m.genes()), 4);
  params.col(0) = m.bias;
  params.col(1) = m.tau;
  params.col(2) = m.decay;
  params.col(3).setZero();
  append_block(out, "[params]", {"beta", "tau", "lambda", "reserved"}, m.gene_names, params);
  return out;
}

GrnModel parse_model(const std::string& text, const std::string& source) {
  const auto rows = csv::parse(text);
  struct Block {
    std::vector<std::string> cols;
    std::vector<const csv::Row*> rows;
  };
  std::vector<std::pair<std::string, Block>> blocks;
  for (const auto& row : rows) {
    const std::string& first = row.cells.front();
    if (first.starts_with('[')) {
      Block b;
      b.cols.assign(row.cells.begin() + 1, row.cells.end());
      blocks.emplace_back(first, std::move(b));
    } else if (blocks.empty()) {
      throw DataError(source + ":" + std::to_string(row.line) + ": data before the first block header");
    } else {
      blocks.back().second.rows.push_back(&row);
    }
  }
  auto find = [&](const std::string& tag) -> const Block* {
    for (const auto& [t, b] : blocks) {
      if (t == tag) return &b;
    }
    return nullptr;
  };
  auto read = [&](const Block& b, std::vector<std::string>* names) {
    Eigen::MatrixXd mat(static_cast<Eigen::Index>(b.rows.size()), static_cast<Eigen::Index>(b.cols.size()));
    for (std::size_t i = 0; i < b.rows.size(); ++i) {
      const auto& r = *b.rows[i];
      if (r.cells.size() != b.cols.size() + 1) {
        throw DataError(source + ":" + std::to_string(r.line) + ": wrong number of cells");
      }
      if (names) names->push_back(r.cells.front());
      for (std::size_t j = 0; j < b.cols.size(); ++j) {
        mat(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = csv::parse_number(
            r.cells[j + 1], source + ":" + std::to_string(r.line) + ":" + std::to_string(j + 2));
      }
    }
    return mat;
  };

  const Block* w = find("[weights]");
  const Block* p = find("[params]");
  if (!w || !p) throw DataError(source + ": model file needs [weights] and [params] blocks");
  GrnModel m;
  std::vector<std::string> row_names;
  m.weights = read(*w, &row_names);
  m.gene_names = w->cols;
  if (row_names != m.gene_names) throw DataError(source + ": weight rows and columns name different genes");
  const auto n = m.weights.rows();
  if (const Block* x = find("[external]")) {
    std::vector<std::string> ext_rows;
    m.external = read(*x, &ext_rows);
    m.input_names = x->cols;
    if (ext_rows != m.gene_names) throw DataError(source + ": [external] rows do not match genes");
  } else {
    m.external = Eigen::MatrixXd::Zero(n, 0);
  }
  std::vector<std::string> param_rows;
  const Eigen::MatrixXd params = read(*p, &param_rows);
  if (params.cols() != 4 || param_rows != m.gene_names) {
    throw DataError(source + ": [params] block must have beta,tau,lambda,reserved for every gene");
  }
  m.bias = params.col(0);
  m.tau = params.col(1);
  m.decay = params.col(2);
  m.validate();
  return m;
}

void save_model(const std::string& path, const GrnModel& m) { csv::write_file(path, format_model(m)); }

GrnModel load_model(const std::string& path) { return parse_model(csv::read_file(path), path); }

std::string format_matrix(const std::vector<std::string>& names, const Eigen::MatrixXd& m) {
  std::string out = "gene";
  for (const auto& n : names) out += "," + n;
  out += '\n';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    out += names[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < m.cols(); ++j) out += "," + csv::format_number(m(i, j));
    out += '\n';
  }
  return out;
}

void save_matrix(const std::string& path, const std::vector<std::string>& names,
                 const Eigen::MatrixXd& m) {
  csv::write_file(path, format_matrix(names, m));
}

LabelledMatrix parse_matrix(const std::string& text, const std::string& source) {
  const auto rows = csv::parse(text);
  if (rows.empty()) throw DataError(source + ": empty file");
  const auto& head = rows.front();
  if (head.cells.front() != "gene") throw DataError(source + ":1:1: expected 'gene' header cell");
  LabelledMatrix lm;
  lm.names.assign(head.cells.begin() + 1, head.cells.end());
  const auto n = static_cast<Eigen::Index>(lm.names.size());
  if (rows.size() != lm.names.size() + 1) {
    throw DataError(source + ": matrix must be square (" + std::to_string(n) + " columns, " +
                    std::to_string(rows.size() - 1) + " rows)");
  }
  lm.values.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& r = rows[static_cast<std::size_t>(i) + 1];
    const std::string where = source + ":" + std::to_string(r.line);
    if (r.cells.front() != lm.names[static_cast<std::size_t>(i)]) {
      throw DataError(where + ":1: row name '" + r.cells.front() + "' does not match column '" +
                      lm.names[static_cast<std::size_t>(i)] + "'");
    }
    if (static_cast<Eigen::Index>(r.cells.size()) != n + 1) throw DataError(where + ": wrong number of cells");
    for (Eigen::Index j = 0; j < n; ++j) {
      lm.values(i, j) = csv::parse_number(r.cells[static_cast<std::size_t>(j) + 1], where + ":" + std::to_string(j + 2));
    }
  }
  return lm;
}

LabelledMatrix load_matrix(const std::string& path) { return parse_matrix(csv::read_file(path), path); }

}  // namespace grn
