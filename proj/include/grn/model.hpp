#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "grn/data.hpp"

namespace grn {

/// Discrete-time recurrent GRN: one node per gene,
///
///   e_i(t+dt) = (dt/tau_i) f(sum_j w_ij e_j + sum_k v_ik u_k + beta_i)
///             + (1 - lambda_i dt/tau_i) e_i(t)
///
/// Row i of `weights` holds the regulators of gene i, so weights(i, j) is the
/// effect of gene j on gene i.
struct GrnModel {
  std::vector<std::string> gene_names;
  std::vector<std::string> input_names;
  Eigen::MatrixXd weights;   // n x n
  Eigen::MatrixXd external;  // n x k_ext
  Eigen::VectorXd bias;
  Eigen::VectorXd tau;
  Eigen::VectorXd decay;

  /// All weights and biases zero, tau = decay = 1. Names default to G1..Gn.
  static GrnModel zeros(std::size_t n, std::size_t k_ext = 0);

  std::size_t genes() const { return static_cast<std::size_t>(weights.rows()); }
  std::size_t inputs() const { return static_cast<std::size_t>(external.cols()); }

  /// Trainable parameters per gene: its weight row, external row and bias.
  std::size_t params_per_gene() const { return genes() + inputs() + 1; }

  /// Gene i's trainable block laid out as [w_i, v_i, beta_i].
  Eigen::VectorXd gene_params(std::size_t i) const;
  void set_gene_params(std::size_t i, const Eigen::VectorXd& theta);

  /// Throws DataError on shape mismatch, tau <= 0, decay < 0 or non-finite values.
  void validate() const;
};

enum class Transfer {
  sigmoid,
  /// f(z) = z. Test hook that makes the step linear in the parameters.
  identity,
};

struct StepConfig {
  double dt = 1.0;
  Transfer transfer = Transfer::sigmoid;
};

/// Throws DataError unless dt > 0 and dt <= tau_i for every gene.
void validate_step(const GrnModel& m, const StepConfig& cfg);

double sigmoid(double z);

/// f and f' for the configured transfer.
double transfer(Transfer t, double z);
double transfer_derivative(Transfer t, double z);

/// Pre-activation net_i = w_i . e + v_i . u + beta_i for every gene.
Eigen::VectorXd net_input(const GrnModel& m, const Eigen::VectorXd& e, const Eigen::VectorXd& u);

Eigen::VectorXd step(const GrnModel& m, const Eigen::VectorXd& e, const Eigen::VectorXd& u,
                     const StepConfig& cfg);

/// Free-running trajectory: column 0 is e0, column t+1 is step(column t).
/// `inputs` needs at least `steps` columns when the model has external inputs
/// and is ignored otherwise.
Eigen::MatrixXd rollout(const GrnModel& m, const Eigen::VectorXd& e0, const Eigen::MatrixXd& inputs,
                        std::size_t steps, const StepConfig& cfg);

/// Per-interval step sizes for a dataset. Uniform spacing gives cfg.dt for
/// every interval; otherwise interval k gets cfg.dt scaled by its length
/// relative to the mean spacing.
std::vector<double> interval_steps(const ExpressionDataset& d, const StepConfig& cfg);

/// Teacher-forced predictions: column t is step(data column t), t = 0..T-2.
Eigen::MatrixXd one_step_predictions(const GrnModel& m, const ExpressionDataset& d,
                                     const StepConfig& cfg);

/// External input column t of a dataset, or an empty vector.
Eigen::VectorXd input_column(const ExpressionDataset& d, std::size_t t);

/// Model file: "[weights]" block (n x n), optional "[external]" block
/// (n x k_ext), and "[params]" block with columns beta, tau, lambda, reserved.
std::string format_model(const GrnModel& m);
GrnModel parse_model(const std::string& text, const std::string& source);
void save_model(const std::string& path, const GrnModel& m);
GrnModel load_model(const std::string& path);

/// Square gene-labelled matrix CSV ("gene,A,B,..." then "A,w_AA,w_AB,...").
std::string format_matrix(const std::vector<std::string>& names, const Eigen::MatrixXd& m);
void save_matrix(const std::string& path, const std::vector<std::string>& names,
                 const Eigen::MatrixXd& m);

struct LabelledMatrix {
  std::vector<std::string> names;
  Eigen::MatrixXd values;
};
LabelledMatrix parse_matrix(const std::string& text, const std::string& source);
LabelledMatrix load_matrix(const std::string& path);

}  // namespace grn
