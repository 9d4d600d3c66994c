#pragma once

/**
 * @file rng.hpp
 * @brief SplitMix64 generator shared by every stochastic stage.
 *
 * The generator is fixed (not std::mt19937 or a distribution object) so a
 * trace produced here can be re-simulated bit-for-bit by any other
 * implementation of the same algorithm.
 */

#include <cstdint>

namespace railshield {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1) from the top 53 bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [lo, hi] (inclusive), one draw.
  int uniform_int(int lo, int hi) {
    const double span = static_cast<double>(hi) - static_cast<double>(lo) + 1.0;
    int v = lo + static_cast<int>(uniform01() * span);
    return v > hi ? hi : v;
  }

  bool bernoulli(double p) { return uniform01() < p; }

  std::uint64_t state() const { return state_; }

 private:
  std::uint64_t state_;
};

}  // namespace railshield
