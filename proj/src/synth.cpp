#include "grn/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "grn/error.hpp"
#include "grn/random.hpp"

namespace grn {

void SynthSpec::validate() const {
  if (genes < 1) throw DataError("synthetic network needs at least one gene");
  if (!(density > 0.0 && density <= 1.0)) throw DataError("density must be in (0, 1]");
  if (!(weight_range > 0.0)) throw DataError("weight range must be positive");
  if (time_points < 2) throw DataError("need at least 2 time points");
  if (!(dt > 0.0 && dt <= 1.0)) throw DataError("dt must be in (0, 1] for tau = 1");
  if (initial_state && static_cast<std::size_t>(initial_state->size()) != genes) {
    throw DataError("initial state length does not match the gene count");
  }
  if (genes >= 2 && edge_count() == 0) throw DataError("density rounds to an empty gold network");
}

std::size_t SynthSpec::edge_count() const {
  return static_cast<std::size_t>(std::llround(density * static_cast<double>(genes * (genes - 1))));
}

SynthNetwork generate_model(const SynthSpec& spec) {
  spec.validate();
  const std::size_t n = spec.genes;
  auto eng = make_engine(spec.seed, Stream::synth, 0);

  SynthNetwork out;
  out.model = GrnModel::zeros(n);
  out.gold.gene_names = out.model.gene_names;

  std::vector<std::size_t> slots;  // flattened off-diagonal positions
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) slots.push_back(i * n + j);
    }
  }
  // Partial Fisher-Yates driven by the engine directly.
  const std::size_t edges = spec.edge_count();
  for (std::size_t k = 0; k < edges; ++k) {
    const std::size_t pick = k + static_cast<std::size_t>(eng() % (slots.size() - k));
    std::swap(slots[k], slots[pick]);
  }
  slots.resize(edges);
  std::sort(slots.begin(), slots.end());

  for (std::size_t s : slots) {
    const auto i = static_cast<Eigen::Index>(s / n);  // target
    const auto j = static_cast<Eigen::Index>(s % n);  // regulator
    const double magnitude = uniform(eng, 0.5 * spec.weight_range, spec.weight_range);
    const bool negative = (eng() & 1ULL) != 0;
    out.model.weights(i, j) = negative ? -magnitude : magnitude;
    out.gold.edges.push_back({out.model.gene_names[static_cast<std::size_t>(j)],
                              out.model.gene_names[static_cast<std::size_t>(i)],
                              negative ? EdgeSign::inhibits : EdgeSign::activates});
  }
  for (Eigen::Index i = 0; i < out.model.bias.size(); ++i) out.model.bias(i) = uniform(eng, -0.1, 0.1);
  return out;
}

ExpressionDataset generate_dataset(const GrnModel& m, const SynthSpec& spec) {
  spec.validate();
  if (m.genes() != spec.genes) throw DataError("model gene count does not match the spec");
  Eigen::VectorXd e0(static_cast<Eigen::Index>(m.genes()));
  if (spec.initial_state) {
    e0 = *spec.initial_state;
  } else {
    auto eng = make_engine(spec.seed, Stream::synth, 1);
    for (Eigen::Index i = 0; i < e0.size(); ++i) e0(i) = uniform(eng, 0.0, 1.0);
  }
  const StepConfig cfg{spec.dt, Transfer::sigmoid};
  validate_step(m, cfg);

  ExpressionDataset d;
  d.gene_names = m.gene_names;
  d.values = rollout(m, e0, Eigen::MatrixXd(), spec.time_points - 1, cfg);
  for (std::size_t t = 0; t < spec.time_points; ++t) d.time_points.push_back(static_cast<double>(t) * spec.dt);
  d.normalized = true;
  d.validate();
  return d;
}

}  // namespace grn
