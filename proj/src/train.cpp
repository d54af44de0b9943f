#include <cmath>
#include <exception>

#include <omp.h>

#include "grn/error.hpp"
#include "grn/random.hpp"
#include "grn/training.hpp"

namespace grn {

namespace {

constexpr double divergence_factor = 1e6;

void check_inputs(const ExpressionDataset& d, const TrainConfig& cfg, const StepConfig& step_cfg) {
  cfg.validate();
  d.validate();
  if (!d.normalized) throw DataError("training expects a normalized dataset");
  GrnModel probe = GrnModel::zeros(d.genes(), d.inputs());
  probe.tau.setConstant(cfg.tau);
  validate_step(probe, step_cfg);
  for (double dt : interval_steps(d, step_cfg)) {
    if (dt > cfg.tau) throw DataError("a sampling interval maps to a step larger than tau");
  }
}

void run_epoch(GrnModel& m, GekfState& filter, const ExpressionDataset& d, const TrainConfig& cfg,
               const StepConfig& step_cfg, const std::vector<double>& dts) {
  if (cfg.optimizer == Optimizer::bptt) {
    m = bptt_update(m, bptt_gradient(m, d, step_cfg, cfg.unroll), cfg.eta);
    return;
  }
  StepConfig local = step_cfg;
  for (std::size_t t = 0; t + 1 < d.times(); ++t) {
    const auto c = static_cast<Eigen::Index>(t);
    local.dt = dts[t];
    gekf_step_inplace(m, filter, d.values.col(c + 1), d.values.col(c), input_column(d, t), local, cfg.gamma);
  }
}

}  // namespace

void TrainConfig::validate() const {
  if (runs < 1) throw DataError("runs must be >= 1");
  if (!(eta > 0.0)) throw DataError("eta must be positive");
  if (!(gamma > 0.0)) throw DataError("gamma must be positive");
  if (!(p0 > 0.0)) throw DataError("p0 must be positive");
  if (!(q >= 0.0)) throw DataError("q must be non-negative");
  if (!(r > 0.0)) throw DataError("r must be positive");
  if (!(init_scale > 0.0)) throw DataError("init_scale must be positive");
  if (!(tau > 0.0)) throw DataError("tau must be positive");
  if (!(lambda >= 0.0)) throw DataError("lambda must be non-negative");
}

GrnModel initial_model(const ExpressionDataset& d, const TrainConfig& cfg, std::size_t run) {
  GrnModel m = GrnModel::zeros(d.genes(), d.inputs());
  m.gene_names = d.gene_names;
  if (d.external) m.input_names = d.external->names;
  m.tau.setConstant(cfg.tau);
  m.decay.setConstant(cfg.lambda);
  auto eng = make_engine(cfg.seed, Stream::init, run);
  for (Eigen::Index i = 0; i < m.weights.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.weights.cols(); ++j) m.weights(i, j) = uniform(eng, -cfg.init_scale, cfg.init_scale);
    for (Eigen::Index k = 0; k < m.external.cols(); ++k) m.external(i, k) = uniform(eng, -cfg.init_scale, cfg.init_scale);
  }
  return m;
}

RunResult train_run(const ExpressionDataset& d, const TrainConfig& cfg, const StepConfig& step_cfg, std::size_t run) {
  RunResult res;
  res.index = run;
  res.seed = derive_seed(cfg.seed, Stream::init, run);
  res.initial = initial_model(d, cfg, run);
  res.model = res.initial;

  const auto dts = interval_steps(d, step_cfg);
  GekfState filter = GekfState::initial(d.genes(), res.model.params_per_gene(), cfg.p0, cfg.q, cfg.r);
  const double initial_loss = sse(res.model, d, step_cfg, cfg.unroll);
  res.loss_history.reserve(cfg.epochs + 1);
  res.loss_history.push_back(initial_loss);

  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    try {
      run_epoch(res.model, filter, d, cfg, step_cfg, dts);
    } catch (const NumericalError& e) {
      res.status = RunStatus::numerical_failure;
      res.message = "epoch " + std::to_string(epoch) + ": " + e.what();
      return res;
    }
    const double loss = sse(res.model, d, step_cfg, cfg.unroll);
    res.loss_history.push_back(loss);
    if (!std::isfinite(loss) || (initial_loss > 0.0 && loss > divergence_factor * initial_loss)) {
      res.status = RunStatus::diverged;
      res.message = "epoch " + std::to_string(epoch) + ": loss " + std::to_string(loss) +
                    " exceeds the divergence bound (initial " + std::to_string(initial_loss) + ")";
      return res;
    }
  }
  return res;
}

Eigen::MatrixXd mean_of(const std::vector<Eigen::MatrixXd>& mats) {
  if (mats.empty()) return {};
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(mats.front().rows(), mats.front().cols());
  for (const auto& m : mats) sum += m;
  return sum / static_cast<double>(mats.size());
}

namespace {

TrainResult collect(std::vector<RunResult> runs) {
  TrainResult out;
  for (const auto& r : runs) {
    if (r.status == RunStatus::ok) out.per_run_weights.push_back(r.model.weights);
  }
  out.mean_weights = mean_of(out.per_run_weights);
  out.runs = std::move(runs);
  return out;
}

}  // namespace

TrainResult train(const ExpressionDataset& d, const TrainConfig& cfg, const StepConfig& step_cfg, int threads) {
  check_inputs(d, cfg, step_cfg);
  std::vector<RunResult> runs(cfg.runs);
  std::exception_ptr failure;
  const int nthreads = threads > 0 ? threads : omp_get_max_threads();
  const auto total = static_cast<long>(cfg.runs);

#pragma omp parallel for schedule(dynamic, 1) num_threads(nthreads)
  for (long r = 0; r < total; ++r) {
    try {
      runs[static_cast<std::size_t>(r)] = train_run(d, cfg, step_cfg, static_cast<std::size_t>(r));
    } catch (...) {
#pragma omp critical(grn_train_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return collect(std::move(runs));
}

TrainResult train_serial(const ExpressionDataset& d, const TrainConfig& cfg, const StepConfig& step_cfg) {
  check_inputs(d, cfg, step_cfg);
  std::vector<RunResult> runs;
  runs.reserve(cfg.runs);
  for (std::size_t r = 0; r < cfg.runs; ++r) runs.push_back(train_run(d, cfg, step_cfg, r));
  return collect(std::move(runs));
}

std::string to_string(Optimizer o) { return o == Optimizer::bptt ? "bptt" : "gekf"; }

std::string to_string(RunStatus s) {
  switch (s) {
    case RunStatus::ok: return "ok";
    case RunStatus::diverged: return "diverged";
    case RunStatus::numerical_failure: return "numerical_failure";
  }
  return "unknown";
}

Optimizer parse_optimizer(const std::string& s) {
  if (s == "bptt") return Optimizer::bptt;
  if (s == "gekf") return Optimizer::gekf;
  throw DataError("unknown optimizer '" + s + "' (expected bptt or gekf)");
}

Unroll parse_unroll(const std::string& s) {
  if (s == "teacher_forced") return Unroll::teacher_forced;
  if (s == "free_running") return Unroll::free_running;
  throw DataError("unknown unroll mode '" + s + "' (expected teacher_forced or free_running)");
}

}  // namespace grn
