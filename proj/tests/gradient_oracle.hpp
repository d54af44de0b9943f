#pragma once

// Finite-difference oracle for the BPTT gradient. It only calls sse(), so it
// never touches the backward pass it checks.

#include <algorithm>
#include <cmath>
#include <random>

#include "grn/training.hpp"
#include "test_util.hpp"

namespace grn::test {

struct Instance {
  GrnModel model;
  ExpressionDataset data;
  StepConfig step;
};

inline Instance random_instance(std::mt19937_64& eng, Eigen::Index n, Eigen::Index times, Eigen::Index k_ext) {
  Instance inst;
  inst.model = GrnModel::zeros(static_cast<std::size_t>(n), static_cast<std::size_t>(k_ext));
  inst.model.weights = random_matrix(eng, n, n, -2.0, 2.0);
  inst.model.external = random_matrix(eng, n, k_ext, -1.0, 1.0);
  inst.model.bias = random_matrix(eng, n, 1, -0.5, 0.5);
  inst.data = make_dataset(random_matrix(eng, n, times, 0.0, 1.0));
  if (k_ext > 0) {
    ExternalInputs ext;
    for (Eigen::Index j = 0; j < k_ext; ++j) ext.names.push_back("U" + std::to_string(j + 1));
    ext.values = random_matrix(eng, k_ext, times, 0.0, 1.0);
    inst.data.external = ext;
  }
  return inst;
}

struct FdCheck {
  bool ok = true;
  double worst_excess = 0.0;  // largest |fd - g| - tolerance seen
};

/// Compares every gradient component with (E(p+h) - E(p-h)) / 2h at
/// h = 1e-6, tolerance max(1e-5, 1e-3 |g|).
inline FdCheck worst_fd_mismatch(const Instance& inst, const Gradient& g, Unroll unroll) {
  constexpr double h = 1e-6;
  FdCheck out;
  out.worst_excess = -1.0;
  auto probe = [&](auto&& poke, double analytic) {
    GrnModel plus = inst.model, minus = inst.model;
    poke(plus, h);
    poke(minus, -h);
    const double fd = (sse(plus, inst.data, inst.step, unroll) - sse(minus, inst.data, inst.step, unroll)) / (2 * h);
    const double tol = std::max(1e-5, 1e-3 * std::abs(analytic));
    const double excess = std::abs(fd - analytic) - tol;
    out.worst_excess = std::max(out.worst_excess, excess);
    if (excess > 0.0) out.ok = false;
  };
  const Eigen::Index n = inst.model.weights.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      probe([&](GrnModel& m, double d) { m.weights(i, j) += d; }, g.weights(i, j));
    }
    for (Eigen::Index k = 0; k < inst.model.external.cols(); ++k) {
      probe([&](GrnModel& m, double d) { m.external(i, k) += d; }, g.external(i, k));
    }
    probe([&](GrnModel& m, double d) { m.bias(i) += d; }, g.bias(i));
  }
  return out;
}

}  // namespace grn::test
