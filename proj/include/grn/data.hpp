#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace grn {

/// External driving variables u_k(t), sampled at the dataset's time points.
struct ExternalInputs {
  std::vector<std::string> names;
  Eigen::MatrixXd values;  // inputs x time points
};

/// Genes x time points expression matrix.
///
/// Invariants (checked by validate()): unique non-empty gene names, at least
/// two strictly increasing time points, matrix shape matching names/times,
/// and every value in [0, 1] when `normalized` is set.
struct ExpressionDataset {
  std::vector<std::string> gene_names;
  std::vector<double> time_points;
  Eigen::MatrixXd values;  // genes x time points
  std::optional<ExternalInputs> external;
  bool normalized = false;

  std::size_t genes() const { return gene_names.size(); }
  std::size_t times() const { return time_points.size(); }
  std::size_t inputs() const { return external ? external->names.size() : 0; }

  void validate() const;
};

enum class EdgeSign : int { inhibits = -1, unsigned_edge = 0, activates = 1 };

struct GoldEdge {
  std::string regulator;
  std::string target;
  EdgeSign sign = EdgeSign::unsigned_edge;
};

/// Reference network: directed edges over a fixed gene universe.
struct GoldNetwork {
  std::vector<std::string> gene_names;
  std::vector<GoldEdge> edges;

  void validate() const;
};

struct LoadOptions {
  /// Literal expected in the top-left cell.
  std::string first_cell = "gene";
};

/// Reads the expression CSV layout: header "gene,t0,t1,...", then one row
/// per gene. Values are kept exactly as parsed; `normalized` is false.
ExpressionDataset load_dataset(const std::string& path, const LoadOptions& options = {});
ExpressionDataset parse_dataset(const std::string& text, const std::string& source,
                                const LoadOptions& options = {});

/// Writes the canonical form; loading a canonical file and saving it again
/// reproduces it byte for byte.
std::string format_dataset(const ExpressionDataset& d);
void save_dataset(const std::string& path, const ExpressionDataset& d);

/// Reads an "input,t0,t1,..." CSV and attaches it to `d`. The time header
/// must match the dataset's exactly.
void attach_external_inputs(ExpressionDataset& d, const std::string& path);
std::string format_external_inputs(const ExpressionDataset& d);

/// Per-gene min-max scaling to [0, 1]; constant genes become 0.5.
ExpressionDataset normalize(const ExpressionDataset& d);

/// Adds N(0, (level * per-gene range)^2) to every value and clamps to [0, 1].
/// Requires a normalized dataset and level >= 0.
ExpressionDataset add_gaussian_noise(const ExpressionDataset& d, double level,
                                     std::uint64_t seed);

/// Tab-separated "regulator<TAB>target<TAB>sign" lines, sign one of +1, -1, ?.
/// Lines starting with '#' and blank lines are ignored.
GoldNetwork load_gold(const std::string& path, const std::vector<std::string>& gene_names);
GoldNetwork parse_gold(const std::string& text, const std::string& source,
                       const std::vector<std::string>& gene_names);
std::string format_gold(const GoldNetwork& gold);
void save_gold(const std::string& path, const GoldNetwork& gold);

/// FNV-1a over names, time points and values; used to show that a data
/// pipeline is untouched by unrelated configuration.
std::uint64_t dataset_hash(const ExpressionDataset& d);

}  // namespace grn
