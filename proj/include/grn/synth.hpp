#pragma once

#include <cstdint>
#include <optional>

#include <Eigen/Core>

#include "grn/data.hpp"
#include "grn/model.hpp"

namespace grn {

struct SynthSpec {
  std::size_t genes = 10;
  double density = 0.15;
  double weight_range = 4.0;
  std::size_t time_points = 101;
  double dt = 1.0;
  std::uint64_t seed = 1;
  /// Drawn uniformly in [0, 1] per gene when absent.
  std::optional<Eigen::VectorXd> initial_state;

  void validate() const;
  /// round(density * n * (n - 1)).
  std::size_t edge_count() const;
};

struct SynthNetwork {
  GrnModel model;
  GoldNetwork gold;
};

/// Sparse off-diagonal weights at seeded positions with magnitudes in
/// [0.5 * range, range] and random signs; tau = lambda = 1; bias in
/// [-0.1, 0.1]. Gold edges mirror the nonzero support with its signs.
SynthNetwork generate_model(const SynthSpec& spec);

/// Rollout of `m` for time_points - 1 steps of dt, packaged with uniform
/// time stamps 0, dt, 2 dt, ... and marked normalized (the dynamics keep
/// every value in [0, 1]).
ExpressionDataset generate_dataset(const GrnModel& m, const SynthSpec& spec);

}  // namespace grn
