#include "grn/random.hpp"

#include <cmath>
#include <numbers>

namespace grn {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, Stream purpose, std::uint64_t index) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ static_cast<std::uint64_t>(purpose));
  return splitmix64(h ^ index);
}

double uniform(std::mt19937_64& eng, double lo, double hi) {
  // 53 random bits -> [0, 1)
  const double u = static_cast<double>(eng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

double standard_normal(std::mt19937_64& eng) {
  double u1 = uniform(eng, 0.0, 1.0);
  while (u1 <= 0.0) u1 = uniform(eng, 0.0, 1.0);
  const double u2 = uniform(eng, 0.0, 1.0);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace grn
