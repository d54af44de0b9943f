#pragma once

#include <stdexcept>
#include <string>

namespace grn {

/// Malformed or inconsistent input (files, shapes, gene sets, config values).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Training broke down numerically: divergence, non-finite values, or a
/// covariance that stopped being positive definite.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace grn
