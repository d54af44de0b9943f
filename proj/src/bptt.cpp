#include <cmath>

#include "grn/error.hpp"
#include "grn/training.hpp"

namespace grn {

namespace {

void check_dataset(const GrnModel& m, const ExpressionDataset& d) {
  if (d.times() < 2) throw DataError("training data needs at least 2 time points");
  if (static_cast<std::size_t>(d.values.rows()) != m.genes()) {
    throw DataError("dataset has " + std::to_string(d.values.rows()) + " genes, model has " +
                    std::to_string(m.genes()));
  }
  if (d.inputs() != m.inputs()) throw DataError("dataset and model disagree on external inputs");
}

}  // namespace

double sse(const GrnModel& m, const ExpressionDataset& d, const StepConfig& cfg, Unroll unroll) {
  check_dataset(m, d);
  const auto dts = interval_steps(d, cfg);
  StepConfig local = cfg;
  Eigen::VectorXd state = d.values.col(0);
  double total = 0.0;
  for (std::size_t t = 0; t + 1 < d.times(); ++t) {
    const auto c = static_cast<Eigen::Index>(t);
    local.dt = dts[t];
    const Eigen::VectorXd& from = unroll == Unroll::teacher_forced ? Eigen::VectorXd(d.values.col(c)) : state;
    const Eigen::VectorXd next = step(m, from, input_column(d, t), local);
    total += (next - d.values.col(c + 1)).squaredNorm();
    state = next;
  }
  return total;
}

Gradient bptt_gradient(const GrnModel& m, const ExpressionDataset& d, const StepConfig& cfg, Unroll unroll) {
  check_dataset(m, d);
  const auto n = static_cast<Eigen::Index>(m.genes());
  const auto steps = d.times() - 1;
  const auto dts = interval_steps(d, cfg);

  // Forward pass: the state fed into each step, its pre-activation and output.
  std::vector<Eigen::VectorXd> inputs(steps), nets(steps), outputs(steps);
  StepConfig local = cfg;
  Eigen::VectorXd state = d.values.col(0);
  double total = 0.0;
  for (std::size_t t = 0; t < steps; ++t) {
    const auto c = static_cast<Eigen::Index>(t);
    inputs[t] = unroll == Unroll::teacher_forced ? Eigen::VectorXd(d.values.col(c)) : state;
    nets[t] = net_input(m, inputs[t], input_column(d, t));
    local.dt = dts[t];
    outputs[t] = step(m, inputs[t], input_column(d, t), local);
    total += (outputs[t] - d.values.col(c + 1)).squaredNorm();
    state = outputs[t];
  }

  Gradient g;
  g.weights = Eigen::MatrixXd::Zero(n, n);
  g.external = Eigen::MatrixXd::Zero(n, static_cast<Eigen::Index>(m.inputs()));
  g.bias = Eigen::VectorXd::Zero(n);
  g.sse = total;

  // carry = dE/d(output of step t) arriving from later steps.
  Eigen::VectorXd carry = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd delta(n);
  for (std::size_t t = steps; t-- > 0;) {
    const auto c = static_cast<Eigen::Index>(t);
    const Eigen::VectorXd err = 2.0 * (outputs[t] - d.values.col(c + 1)) + carry;
    for (Eigen::Index i = 0; i < n; ++i) {
      delta(i) = err(i) * (dts[t] / m.tau(i)) * transfer_derivative(cfg.transfer, nets[t](i));
    }
    if (!delta.allFinite()) {
      throw NumericalError("non-finite backpropagated error at time index " + std::to_string(t));
    }
    g.weights.noalias() += delta * inputs[t].transpose();
    if (m.inputs() > 0) g.external.noalias() += delta * input_column(d, t).transpose();
    g.bias += delta;

    if (unroll == Unroll::free_running && t > 0) {
      carry = m.weights.transpose() * delta;
      for (Eigen::Index j = 0; j < n; ++j) carry(j) += err(j) * (1.0 - m.decay(j) * dts[t] / m.tau(j));
    }
  }
  return g;
}

GrnModel bptt_update(const GrnModel& m, const Gradient& g, double eta) {
  if (g.weights.rows() != m.weights.rows() || g.weights.cols() != m.weights.cols() ||
      g.external.cols() != m.external.cols() || g.bias.size() != m.bias.size()) {
    throw DataError("gradient shape does not match the model");
  }
  GrnModel out = m;
  out.weights -= eta * g.weights;
  out.external -= eta * g.external;
  out.bias -= eta * g.bias;
  return out;
}

Eigen::RowVectorXd step_jacobian(const GrnModel& m, std::size_t gene, const Eigen::VectorXd& prev,
                                 const Eigen::VectorXd& u, const StepConfig& cfg) {
  const auto i = static_cast<Eigen::Index>(gene);
  const auto n = static_cast<Eigen::Index>(m.genes());
  const auto k = static_cast<Eigen::Index>(m.inputs());
  double net = m.weights.row(i).dot(prev) + m.bias(i);
  if (k > 0) net += m.external.row(i).dot(u);
  // Same local derivative the backward pass uses: d yhat_i / d net_i.
  const double scale = (cfg.dt / m.tau(i)) * transfer_derivative(cfg.transfer, net);
  Eigen::RowVectorXd c(n + k + 1);
  c.head(n) = scale * prev.transpose();
  if (k > 0) c.segment(n, k) = scale * u.transpose();
  c(n + k) = scale;
  return c;
}

}  // namespace grn
