#include <cmath>

#include <Eigen/Cholesky>

#include "grn/error.hpp"
#include "grn/training.hpp"

namespace grn {

GekfState GekfState::initial(std::size_t genes, std::size_t params_per_gene, double p0, double q, double r) {
  GekfState s;
  const auto w = static_cast<Eigen::Index>(params_per_gene);
  s.cov.assign(genes, p0 * Eigen::MatrixXd::Identity(w, w));
  s.q = q;
  s.r = r;
  return s;
}

std::optional<std::string> GekfState::health() const {
  for (std::size_t i = 0; i < cov.size(); ++i) {
    const Eigen::MatrixXd& k = cov[i];
    if (!k.allFinite()) return "covariance of gene " + std::to_string(i) + " is not finite";
    const double asym = (k - k.transpose()).cwiseAbs().maxCoeff();
    const double scale = std::max(k.cwiseAbs().maxCoeff(), 1e-300);
    if (asym > 1e-10 * scale) return "covariance of gene " + std::to_string(i) + " is not symmetric";
    Eigen::LLT<Eigen::MatrixXd> llt(k);
    if (llt.info() != Eigen::Success) {
      return "covariance of gene " + std::to_string(i) + " is not positive definite";
    }
  }
  return std::nullopt;
}

Eigen::VectorXd gekf_correct(Eigen::VectorXd& theta, Eigen::MatrixXd& cov, const Eigen::RowVectorXd& jacobian,
                             double innovation, double r, double q, double gamma) {
  const Eigen::VectorXd kc = cov * jacobian.transpose();  // K C^T
  const double gamma_scalar = 1.0 / (jacobian.dot(kc) + r);
  const Eigen::VectorXd gain = kc * gamma_scalar;
  theta += gain * (innovation * gamma);
  // K - G C K; C K = (K C^T)^T because K is symmetric.
  cov.noalias() -= gain * kc.transpose();
  cov.diagonal().array() += q;
  cov = 0.5 * (cov + cov.transpose()).eval();
  return gain;
}

void gekf_step_inplace(GrnModel& m, GekfState& s, const Eigen::VectorXd& target, const Eigen::VectorXd& prev,
                       const Eigen::VectorXd& u, const StepConfig& cfg, double gamma) {
  const std::size_t n = m.genes();
  if (s.cov.size() != n) throw DataError("filter state has the wrong number of genes");
  if (static_cast<std::size_t>(target.size()) != n || static_cast<std::size_t>(prev.size()) != n) {
    throw DataError("target/previous state length does not match the model");
  }
  if (static_cast<std::size_t>(u.size()) != m.inputs()) throw DataError("external input length mismatch");

  // Each gene's prediction depends only on its own parameter block, so the
  // per-gene updates commute.
  const Eigen::VectorXd predicted = step(m, prev, u, cfg);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    const Eigen::RowVectorXd c = step_jacobian(m, i, prev, u, cfg);
    if (!c.allFinite()) throw NumericalError("non-finite Jacobian for gene " + m.gene_names[i]);
    Eigen::VectorXd theta = m.gene_params(i);
    const double innovation = target(row) - predicted(row);
    gekf_correct(theta, s.cov[i], c, innovation, s.r, s.q, gamma);
    Eigen::LLT<Eigen::MatrixXd> llt(s.cov[i]);
    if (!s.cov[i].allFinite() || llt.info() != Eigen::Success) {
      throw NumericalError("covariance of gene " + m.gene_names[i] + " lost positive definiteness");
    }
    if (!theta.allFinite()) throw NumericalError("non-finite parameters for gene " + m.gene_names[i]);
    m.set_gene_params(i, theta);
  }
}

GekfStepResult gekf_step(const GrnModel& m, const GekfState& s, const Eigen::VectorXd& target,
                         const Eigen::VectorXd& prev, const Eigen::VectorXd& u, const StepConfig& cfg,
                         double gamma) {
  GekfStepResult out{m, s};
  gekf_step_inplace(out.model, out.state, target, prev, u, cfg, gamma);
  return out;
}

}  // namespace grn
