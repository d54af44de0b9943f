#pragma once

#include <filesystem>
#include <random>
#include <string>

#include <Eigen/Core>

#include "grn/data.hpp"

namespace grn::test {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() / ("grn_" + tag + "_" + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::string file(const std::string& name) const { return (path_ / name).string(); }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline ExpressionDataset make_dataset(const Eigen::MatrixXd& values) {
  ExpressionDataset d;
  for (Eigen::Index i = 0; i < values.rows(); ++i) d.gene_names.push_back("G" + std::to_string(i + 1));
  for (Eigen::Index t = 0; t < values.cols(); ++t) d.time_points.push_back(static_cast<double>(t));
  d.values = values;
  d.normalized = values.minCoeff() >= 0.0 && values.maxCoeff() <= 1.0;
  return d;
}

inline Eigen::MatrixXd random_matrix(std::mt19937_64& eng, Eigen::Index rows, Eigen::Index cols, double lo,
                                     double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = dist(eng);
  }
  return m;
}

}  // namespace grn::test
