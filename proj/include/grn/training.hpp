#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "grn/data.hpp"
#include "grn/model.hpp"

namespace grn {

enum class Optimizer { bptt, gekf };

/// How the squared-error loss is unrolled over the series.
enum class Unroll {
  /// Each prediction starts from the observed previous column.
  teacher_forced,
  /// Predictions feed back into the next step, starting from column 0.
  free_running,
};

struct TrainConfig {
  Optimizer optimizer = Optimizer::gekf;
  Unroll unroll = Unroll::teacher_forced;
  std::size_t epochs = 1000;
  double eta = 0.05;
  double gamma = 1.0;
  double p0 = 100.0;
  double q = 1e-4;
  double r = 1e-2;
  std::size_t runs = 10;
  std::uint64_t seed = 1;
  double init_scale = 0.1;
  double tau = 1.0;
  double lambda = 1.0;

  /// Throws DataError when a field is out of range.
  void validate() const;
};

/// dE/dtheta, same layout as the model's trainable parameters.
struct Gradient {
  Eigen::MatrixXd weights;
  Eigen::MatrixXd external;
  Eigen::VectorXd bias;
  double sse = 0.0;
};

/// Sum of squared prediction errors over genes and time points 1..T-1.
double sse(const GrnModel& m, const ExpressionDataset& d, const StepConfig& cfg,
           Unroll unroll = Unroll::teacher_forced);

/// Backpropagation through time for E = sum_t sum_i (yhat_i(t) - y_i(t))^2.
///
/// The backward pass carries delta_i(t) = dE/dnet_i(t). Under free-running
/// unrolling the error signal of gene j at step t picks up
/// sum_l delta_l(t+1) w_lj from the following step plus the self term
/// through (1 - lambda_j dt/tau_j); under teacher forcing each step stands
/// alone. Weight gradients accumulate delta_i(t) * e_j(t).
Gradient bptt_gradient(const GrnModel& m, const ExpressionDataset& d, const StepConfig& cfg,
                       Unroll unroll = Unroll::teacher_forced);

/// Plain descent: every trainable parameter p becomes p - eta * g_p.
GrnModel bptt_update(const GrnModel& m, const Gradient& g, double eta);

/// Row Jacobian d yhat_i / d theta_i of one teacher-forced step for gene i,
/// laid out like GrnModel::gene_params.
Eigen::RowVectorXd step_jacobian(const GrnModel& m, std::size_t gene, const Eigen::VectorXd& prev,
                                 const Eigen::VectorXd& u, const StepConfig& cfg);

/// Per-gene error covariances of the decoupled filter.
struct GekfState {
  std::vector<Eigen::MatrixXd> cov;
  double q = 0.0;
  double r = 1.0;

  static GekfState initial(std::size_t genes, std::size_t params_per_gene, double p0, double q,
                           double r);

  /// Empty when every covariance is symmetric (1e-10 relative) and has a
  /// Cholesky factor; otherwise a description of the first failure.
  std::optional<std::string> health() const;
};

/// Scalar-measurement Kalman correction shared by every gene's filter:
///   Gamma = 1 / (C K C^T + r),  G = K C^T Gamma,
///   theta += G * innovation * gamma,  K = K - G C K + q I, symmetrized.
/// Returns the gain G.
Eigen::VectorXd gekf_correct(Eigen::VectorXd& theta, Eigen::MatrixXd& cov,
                             const Eigen::RowVectorXd& jacobian, double innovation, double r,
                             double q, double gamma);

struct GekfStepResult {
  GrnModel model;
  GekfState state;
};

/// One decoupled GEKF update per gene for the transition prev -> target.
/// Throws NumericalError on a non-finite Jacobian or a covariance that loses
/// positive definiteness.
GekfStepResult gekf_step(const GrnModel& m, const GekfState& s, const Eigen::VectorXd& target,
                         const Eigen::VectorXd& prev, const Eigen::VectorXd& u,
                         const StepConfig& cfg, double gamma);

/// In-place form used by the training loop.
void gekf_step_inplace(GrnModel& m, GekfState& s, const Eigen::VectorXd& target,
                       const Eigen::VectorXd& prev, const Eigen::VectorXd& u,
                       const StepConfig& cfg, double gamma);

enum class RunStatus { ok, diverged, numerical_failure };

struct RunResult {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  RunStatus status = RunStatus::ok;
  std::string message;
  GrnModel initial;
  GrnModel model;
  /// Entry 0 is the loss before training, entry e the loss after epoch e.
  std::vector<double> loss_history;
};

struct TrainResult {
  Eigen::MatrixXd mean_weights;
  /// Final weights of the runs that completed, in run order.
  std::vector<Eigen::MatrixXd> per_run_weights;
  std::vector<RunResult> runs;

  std::size_t completed() const { return per_run_weights.size(); }
};

/// Seeded initial parameters for run `run`: weights and external weights
/// uniform in [-init_scale, init_scale], zero bias, tau and lambda from cfg.
GrnModel initial_model(const ExpressionDataset& d, const TrainConfig& cfg, std::size_t run);

/// One independent training run. Never throws for numerical trouble; the
/// outcome is reported in the result's status.
RunResult train_run(const ExpressionDataset& d, const TrainConfig& cfg, const StepConfig& step_cfg,
                    std::size_t run);

/// Runs are executed in parallel (OpenMP, `threads` <= 0 means the runtime
/// default). The result does not depend on the thread count.
TrainResult train(const ExpressionDataset& d, const TrainConfig& cfg, const StepConfig& step_cfg,
                  int threads = 0);

/// Sequential reference for train(); kept for tests and benchmarks.
TrainResult train_serial(const ExpressionDataset& d, const TrainConfig& cfg,
                         const StepConfig& step_cfg);

/// Element-wise mean of the completed runs, accumulated in run order.
Eigen::MatrixXd mean_of(const std::vector<Eigen::MatrixXd>& mats);

std::string to_string(Optimizer o);
std::string to_string(RunStatus s);
Optimizer parse_optimizer(const std::string& s);
Unroll parse_unroll(const std::string& s);

}  // namespace grn
