#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace grn {

/// Named substreams derived from one user seed. Each purpose hashes to its
/// own stream, so adding a consumer never shifts the draws of another.
enum class Stream : std::uint64_t {
  init = 1,
  noise = 2,
  synth = 3,
};

std::uint64_t splitmix64(std::uint64_t x);

/// Seed for substream `purpose`, item `index` (e.g. training run number).
std::uint64_t derive_seed(std::uint64_t seed, Stream purpose, std::uint64_t index = 0);

inline std::mt19937_64 make_engine(std::uint64_t seed, Stream purpose, std::uint64_t index = 0) {
  return std::mt19937_64(derive_seed(seed, purpose, index));
}

/// Uniform double in [lo, hi) from the top 53 bits of one engine draw, so
/// the sequence depends only on the engine, not on library distributions.
double uniform(std::mt19937_64& eng, double lo, double hi);

/// Standard normal by Box-Muller over `uniform`.
double standard_normal(std::mt19937_64& eng);

}  // namespace grn
