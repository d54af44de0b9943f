// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Each line carries the measured values and the runtime.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gradient_oracle.hpp"
#include "kalman_oracle.hpp"
#include "test_util.hpp"

#include "grn/csv.hpp"
#include "grn/data.hpp"
#include "grn/evaluation.hpp"
#include "grn/model.hpp"
#include "grn/synth.hpp"
#include "grn/training.hpp"

using namespace grn;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<Outcome()> check;
};

double round2(double x) { return std::round(x * 100.0) / 100.0; }

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// ---------------------------------------------------------------------------
// 1. Metric reproduction

// Lays out n*n cells so that score() sees exactly the requested counts.
ConfusionCounts realize(const ConfusionCounts& c, std::size_t n) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("g" + std::to_string(i));
  SignedAdjacency pred{names, Eigen::MatrixXi::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n))};
  GoldNetwork gold{names, {}};
  long cell = 0;
  auto place = [&](long count, bool in_pred, bool in_gold) {
    for (long k = 0; k < count; ++k, ++cell) {
      const std::size_t i = static_cast<std::size_t>(cell) / n, j = static_cast<std::size_t>(cell) % n;
      if (in_pred) pred.matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = 1;
      if (in_gold) gold.edges.push_back({names[j], names[i], EdgeSign::activates});
    }
  };
  place(c.tp, true, true);
  place(c.fp, true, false);
  place(c.fn, false, true);
  return score(pred, gold, ScoreMode::unsigned_edges).counts;
}

Outcome metric_reproduction() {
  struct Row {
    const char* label;
    ConfusionCounts counts;
    std::size_t n;
    std::vector<std::pair<std::optional<double> EvalReport::*, double>> expected;
  };
  const std::vector<Row> rows = {
      {"SOS", {15, 16, 0, 33}, 8,
       {{&EvalReport::sensitivity, 1.0}, {&EvalReport::specificity, 0.67}, {&EvalReport::precision, 0.48},
        {&EvalReport::recall, 1.0}, {&EvalReport::f_score, 0.65}}},
      {"IRMA-OFF", {7, 3, 1, 14}, 5,
       {{&EvalReport::sensitivity, 0.88}, {&EvalReport::specificity, 0.82}, {&EvalReport::precision, 0.70},
        {&EvalReport::f_score, 0.78}}},
      {"IRMA-ON", {7, 2, 1, 15}, 5,
       {{&EvalReport::sensitivity, 0.88}, {&EvalReport::specificity, 0.88}, {&EvalReport::precision, 0.78},
        {&EvalReport::f_score, 0.82}}},
      {"10-gene", {14, 13, 1, 72}, 10,
       {{&EvalReport::sensitivity, 0.93}, {&EvalReport::specificity, 0.85}, {&EvalReport::precision, 0.52}}},
  };
  Outcome out{true, ""};
  for (const Row& row : rows) {
    const ConfusionCounts c = realize(row.counts, row.n);
    const bool counts_ok = c.tp == row.counts.tp && c.fp == row.counts.fp && c.fn == row.counts.fn &&
                           c.tn == row.counts.tn;
    const EvalReport r = report_from_counts(c);
    bool ok = counts_ok;
    for (const auto& [field, value] : row.expected) {
      const auto& got = r.*field;
      ok = ok && got.has_value() && round2(*got) == value;
    }
    out.pass = out.pass && ok;
    out.detail += std::string(out.detail.empty() ? "" : " ") + row.label + (ok ? ":ok" : ":MISMATCH");
  }
  return out;
}

// ---------------------------------------------------------------------------
// 2. Gradient correctness

Outcome gradient_correctness() {
  std::mt19937_64 eng(2024);
  int failures = 0;
  double worst = -1.0;
  for (int k = 0; k < 25; ++k) {
    const Eigen::Index n = 2 + k % 3;
    const Eigen::Index times = 3 + (k / 3) % 4;
    test::Instance inst = test::random_instance(eng, n, times, k % 2);
    for (Unroll unroll : {Unroll::teacher_forced, Unroll::free_running}) {
      const auto fd = test::worst_fd_mismatch(inst, bptt_gradient(inst.model, inst.data, inst.step, unroll), unroll);
      worst = std::max(worst, fd.worst_excess);
      if (!fd.ok) ++failures;
    }
  }
  return {failures == 0, "25 instances x 2 unroll modes, failures=" + std::to_string(failures) +
                             " worst(|fd-g|-tol)=" + fmt("%.3g", worst)};
}

// ---------------------------------------------------------------------------
// 3. Kalman sanity

Outcome kalman_sanity() {
  std::mt19937_64 eng(99);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  bool spd = true;

  {
    Eigen::VectorXd theta = Eigen::VectorXd::Zero(1);
    Eigen::MatrixXd cov = Eigen::MatrixXd::Constant(1, 1, 5.0);
    test::ScalarKf kf;
    kf.p = 5.0;
    for (int t = 0; t < 100; ++t) {
      const double h = 2.0 * unit(eng) - 1.0;
      const double z = -0.6 * h + 0.05 * (unit(eng) - 0.5);
      kf.correct(h, z, 0.03, 1e-4, 1.0);
      gekf_correct(theta, cov, Eigen::RowVectorXd::Constant(1, h), z - h * theta(0), 0.03, 1e-4, 1.0);
      worst = std::max({worst, std::abs(theta(0) - kf.x), std::abs(cov(0, 0) - kf.p)});
      spd = spd && cov(0, 0) > 0.0;
    }
  }
  {
    GrnModel m = GrnModel::zeros(1);
    const StepConfig cfg{1.0, Transfer::identity};
    GekfState s = GekfState::initial(1, 2, 10.0, 1e-4, 0.01);
    test::TwoStateKf kf;
    kf.p = {{{10.0, 0.0}, {0.0, 10.0}}};
    for (int t = 0; t < 100; ++t) {
      const double e = unit(eng), target = unit(eng);
      const double rate = cfg.dt / m.tau(0);
      kf.correct({rate * e, rate}, target - (1.0 - m.decay(0) * rate) * e, 0.01, 1e-4, 1.0);
      gekf_step_inplace(m, s, Eigen::VectorXd::Constant(1, target), Eigen::VectorXd::Constant(1, e), {}, cfg, 1.0);
      worst = std::max({worst, std::abs(m.weights(0, 0) - kf.x[0]), std::abs(m.bias(0) - kf.x[1])});
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) worst = std::max(worst, std::abs(s.cov[0](a, b) - kf.p[a][b]));
      }
      spd = spd && !s.health().has_value();
    }
  }
  {
    GrnModel m = GrnModel::zeros(4, 1);
    m.weights = test::random_matrix(eng, 4, 4, -1, 1);
    GekfState s = GekfState::initial(4, m.params_per_gene(), 100.0, 1e-4, 1e-2);
    for (int t = 0; t < 100; ++t) {
      gekf_step_inplace(m, s, test::random_matrix(eng, 4, 1, 0, 1), test::random_matrix(eng, 4, 1, 0, 1),
                        test::random_matrix(eng, 1, 1, 0, 1), {}, 1.0);
      spd = spd && !s.health().has_value();
    }
  }
  return {worst < 1e-10 && spd,
          "max|gekf-kf|=" + fmt("%.3g", worst) + " covariances " + (spd ? "SPD" : "NOT SPD")};
}

// ---------------------------------------------------------------------------
// 4 and 5. Synthetic recovery with and without noise

constexpr int recovery_seeds = 10;
constexpr int recovery_needed = 8;

SynthSpec recovery_spec(std::uint64_t seed) {
  SynthSpec spec;
  spec.genes = 5;
  spec.density = 0.25;
  spec.time_points = 101;
  spec.weight_range = 8.0;
  spec.seed = seed;
  return spec;
}

TrainConfig recovery_config(std::uint64_t seed) {
  TrainConfig cfg;
  cfg.optimizer = Optimizer::gekf;
  cfg.runs = 10;
  cfg.epochs = 30;
  cfg.r = 1.0;
  cfg.seed = seed;
  return cfg;
}

struct Recovery {
  EvalReport clean;
  EvalReport noisy;
  double baseline_f = 0.0;
};

std::vector<Recovery>& recoveries() {
  static std::vector<Recovery> cache;
  return cache;
}

EvalReport infer_and_score(const ExpressionDataset& d, const GoldNetwork& gold, std::uint64_t seed) {
  const TrainResult res = train(d, recovery_config(seed), {});
  if (res.completed() == 0) return report_from_counts({0, 0, static_cast<long>(gold.edges.size()), 0});
  return score(discretize_iqr(d.gene_names, res.mean_weights), gold, ScoreMode::unsigned_edges);
}

Outcome synthetic_recovery() {
  auto& all = recoveries();
  all.clear();
  int passed = 0;
  std::ostringstream seeds;
  for (int s = 1; s <= recovery_seeds; ++s) {
    const SynthSpec spec = recovery_spec(static_cast<std::uint64_t>(s));
    const SynthNetwork net = generate_model(spec);
    const ExpressionDataset d = generate_dataset(net.model, spec);
    Recovery rec;
    rec.clean = infer_and_score(d, net.gold, static_cast<std::uint64_t>(s));
    const long predicted = rec.clean.counts.tp + rec.clean.counts.fp;
    const long gold = static_cast<long>(net.gold.edges.size());
    rec.baseline_f = random_expected_f_score(predicted, gold, rec.clean.counts.total());
    const double sens = rec.clean.sensitivity.value_or(0.0);
    const double f = rec.clean.f_score.value_or(0.0);
    const bool ok = sens >= 0.8 && f >= 0.6 && f > rec.baseline_f;
    passed += ok;
    seeds << " s" << s << "(sens=" << fmt("%.2f", sens) << ",F=" << fmt("%.3f", f)
          << ",rand=" << fmt("%.3f", rec.baseline_f) << ")";
    all.push_back(rec);
  }
  int sens_ok = 0, f_ok = 0, above_random = 0;
  for (const Recovery& r : all) {
    sens_ok += r.clean.sensitivity.value_or(0.0) >= 0.8;
    f_ok += r.clean.f_score.value_or(0.0) >= 0.6;
    above_random += r.clean.f_score.value_or(0.0) > r.baseline_f;
  }
  return {passed >= recovery_needed,
          std::to_string(passed) + "/10 seeds pass all three (need 8); sens>=0.8: " + std::to_string(sens_ok) +
              "/10, F>=0.6: " + std::to_string(f_ok) + "/10, F>random: " + std::to_string(above_random) +
              "/10;" + seeds.str()};
}

Outcome noise_robustness() {
  auto& all = recoveries();
  if (all.size() != recovery_seeds) synthetic_recovery();
  int passed = 0;
  std::ostringstream seeds;
  for (int s = 1; s <= recovery_seeds; ++s) {
    const SynthSpec spec = recovery_spec(static_cast<std::uint64_t>(s));
    const SynthNetwork net = generate_model(spec);
    const ExpressionDataset noisy =
        add_gaussian_noise(generate_dataset(net.model, spec), 0.05, static_cast<std::uint64_t>(s));
    Recovery& rec = all[static_cast<std::size_t>(s - 1)];
    rec.noisy = infer_and_score(noisy, net.gold, static_cast<std::uint64_t>(s));
    const double clean = rec.clean.sensitivity.value_or(0.0);
    const double dirty = rec.noisy.sensitivity.value_or(0.0);
    const bool ok = clean - dirty <= 0.15 + 1e-12;
    passed += ok;
    seeds << " s" << s << "(" << fmt("%.2f", clean) << "->" << fmt("%.2f", dirty) << ")";
  }
  return {passed >= recovery_needed,
          std::to_string(passed) + "/10 seeds with sensitivity drop <= 0.15 (need 8);" + seeds.str()};
}

// ---------------------------------------------------------------------------
// 6. Dynamics invariants

Outcome dynamics_invariants() {
  std::mt19937_64 eng(6);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  long outside = 0, outside_unit_decay = 0, unit_decay_trials = 0;
  double worst_excursion = 0.0;
  for (int trial = 0; trial < 100000; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(trial % 5);
    GrnModel m = GrnModel::zeros(n);
    const auto ni = static_cast<Eigen::Index>(n);
    m.weights = test::random_matrix(eng, ni, ni, -10, 10);
    m.bias = test::random_matrix(eng, ni, 1, -5, 5);
    const bool unit_decay = trial % 2 == 0;
    for (Eigen::Index i = 0; i < ni; ++i) {
      m.tau(i) = 0.2 + 3.0 * unit(eng);
      m.decay(i) = unit_decay ? 1.0 : unit(eng);
    }
    const StepConfig cfg{m.tau.minCoeff() * (unit(eng) * (1.0 - 1e-12) + 1e-12)};
    const Eigen::VectorXd e = test::random_matrix(eng, ni, 1, 0, 1);
    const Eigen::VectorXd out = step(m, e, {}, cfg);
    const bool bad = out.minCoeff() < 0.0 || out.maxCoeff() > 1.0;
    worst_excursion = std::max({worst_excursion, -out.minCoeff(), out.maxCoeff() - 1.0});
    outside += bad;
    if (unit_decay) {
      ++unit_decay_trials;
      outside_unit_decay += bad;
    }
  }

  bool composition = true;
  for (int trial = 0; trial < 50; ++trial) {
    GrnModel m = GrnModel::zeros(4, 1);
    m.weights = test::random_matrix(eng, 4, 4, -4, 4);
    m.external = test::random_matrix(eng, 4, 1, -1, 1);
    const Eigen::VectorXd e0 = test::random_matrix(eng, 4, 1, 0, 1);
    const Eigen::MatrixXd inputs = test::random_matrix(eng, 1, 40, 0, 1);
    const StepConfig cfg{0.5};
    const Eigen::MatrixXd full = rollout(m, e0, inputs, 39, cfg);
    const Eigen::MatrixXd first = rollout(m, e0, inputs.leftCols(15), 14, cfg);
    const Eigen::MatrixXd second = rollout(m, first.col(14), inputs.rightCols(26), 25, cfg);
    composition = composition && first == full.leftCols(15) && second == full.rightCols(26);
  }

  const GrnModel zero = GrnModel::zeros(6);
  const Eigen::MatrixXd traj = rollout(zero, test::random_matrix(eng, 6, 1, 0, 1), Eigen::MatrixXd(0, 11), 10, {});
  const bool fixed_point = (traj.rightCols(10).array() == 0.5).all();

  return {outside == 0 && composition && fixed_point,
          "unit box violations " + std::to_string(outside) + "/100000 (lambda=1: " +
              std::to_string(outside_unit_decay) + "/" + std::to_string(unit_decay_trials) +
              ", lambda<1: " + std::to_string(outside - outside_unit_decay) + "/" +
              std::to_string(100000 - unit_decay_trials) + ", worst excursion " + fmt("%.3g", worst_excursion) +
              "); composition " + (composition ? "bit-identical" : "DIFFERS") + "; zero-model fixed point " +
              (fixed_point ? "0.5" : "WRONG")};
}

// ---------------------------------------------------------------------------
// 7. Discretization properties

Outcome discretization_properties() {
  std::mt19937_64 eng(7);
  std::uniform_real_distribution<double> scale(0.01, 100.0), shift(-50.0, 50.0);
  int affine_bad = 0, negation_bad = 0, bound_bad = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index n = 2 + trial % 14;
    std::vector<std::string> names;
    for (Eigen::Index i = 0; i < n; ++i) names.push_back("g" + std::to_string(i));
    const Eigen::MatrixXd w = test::random_matrix(eng, n, n, -3, 3);
    const SignedAdjacency base = discretize_iqr(names, w);
    const double a = scale(eng), b = shift(eng);
    affine_bad += discretize_iqr(names, (a * w.array() + b).matrix()).matrix != base.matrix;
    negation_bad += discretize_iqr(names, -w).matrix != -base.matrix;
    // Strictly below the interpolated Q1 can only be the entries at sorted
    // positions up to floor((N-1)/4); symmetrically for Q3.
    const long N = n * n;
    const long bound = (N - 1) / 4 + 1;
    const long low = (base.matrix.array() == -1).count(), high = (base.matrix.array() == 1).count();
    bound_bad += low > bound || high > bound || low + high > N;
  }
  return {affine_bad == 0 && negation_bad == 0 && bound_bad == 0,
          "100 matrices: affine mismatches " + std::to_string(affine_bad) + ", negation mismatches " +
              std::to_string(negation_bad) + ", bucket bound violations " + std::to_string(bound_bad)};
}

// ---------------------------------------------------------------------------
// 8. CLI determinism

int shell(const std::string& args) {
  const std::string cmd = std::string(GRNINFER_PATH) + " " + args + " > /dev/null 2>&1";
  return std::system(cmd.c_str());
}

Outcome cli_determinism() {
  test::TempDir dir("acceptance_cli");
  if (shell("synth --genes 10 --density 0.15 --points 101 --seed 11 --out-data " + dir.file("d.csv") +
            " --out-gold " + dir.file("g.tsv")) != 0) {
    return {false, "synth invocation failed"};
  }
  const std::string base = "train --data " + dir.file("d.csv") + " --seed 5 --runs 10 --epochs 50";
  int status = 0;
  status |= shell(base + " --threads 1 --out " + dir.file("a"));
  status |= shell(base + " --threads 1 --out " + dir.file("b"));
  status |= shell(base + " --threads 4 --out " + dir.file("c"));
  if (status != 0) return {false, "train invocation failed"};
  const std::string a = csv::read_file(dir.file("a/weights.csv"));
  const bool repeat = a == csv::read_file(dir.file("b/weights.csv"));
  const bool threads = a == csv::read_file(dir.file("c/weights.csv"));
  return {repeat && threads && !a.empty(), std::string("repeat invocation ") + (repeat ? "identical" : "DIFFERS") +
                                               ", threads 1 vs 4 " + (threads ? "identical" : "DIFFERS") + " (" +
                                               std::to_string(a.size()) + " bytes)"};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "metric reproduction", 1.0, metric_reproduction},
      {2, "gradient correctness", 10.0, gradient_correctness},
      {3, "kalman sanity", 5.0, kalman_sanity},
      {4, "synthetic recovery", 300.0, synthetic_recovery},
      {5, "noise robustness", 300.0, noise_robustness},
      {6, "dynamics invariants", 5.0, dynamics_invariants},
      {7, "discretization properties", 2.0, discretization_properties},
      {8, "determinism", 120.0, cli_determinism},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs <= c.budget_s;
    const bool pass = o.pass && in_time;
    failed += !pass;
    std::printf("%s criterion %d (%s) [%.2fs / budget %.0fs%s]: %s\n", pass ? "PASS" : "FAIL", c.id, c.name, secs,
                c.budget_s, in_time ? "" : ", OVER BUDGET", o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
