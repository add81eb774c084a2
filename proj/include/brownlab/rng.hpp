#pragma once

#include <cmath>
#include <cstdint>

#include "brownlab/numerics.hpp"

namespace brownlab {

/// Stateless counter-based generator: every draw is a hash of
/// (seed, stream, counter), so results do not depend on evaluation order.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0) : key_(mix(seed ^ mix(stream + 0x632be59bd9b4e019ULL))) {}

  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t bits(std::uint64_t counter) const { return mix(key_ ^ mix(counter)); }

  /// Uniform on the open interval (0, 1).
  double uniform(std::uint64_t counter) const { return (static_cast<double>(bits(counter) >> 11) + 0.5) * 0x1.0p-53; }

  /// Standard normal pair by Box-Muller from counters 2c and 2c+1.
  std::pair<double, double> normal_pair(std::uint64_t c) const {
    const double r = std::sqrt(-2 * std::log(uniform(2 * c))), th = 2 * kPi * uniform(2 * c + 1);
    return {r * std::cos(th), r * std::sin(th)};
  }

  /// Complex Gaussian with E|z|^2 = var.
  cplx complex_normal(std::uint64_t c, double var) const {
    const auto [x, y] = normal_pair(c);
    return std::sqrt(var / 2) * cplx(x, y);
  }

 private:
  std::uint64_t key_;
};

}  // namespace brownlab
