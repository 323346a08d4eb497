#pragma once

#include <cstdint>

#include "sgslope/distributions.hpp"

namespace sgslope {

/// Counter-based generator: each draw hashes (seed, counter) with the
/// splitmix64 finalizer, so streams are reproducible across platforms and
/// independent of call-site history length.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  static std::uint64_t mix(std::uint64_t seed, std::uint64_t counter) {
    std::uint64_t z = seed + (counter + 1) * 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  std::uint64_t next_u64() { return mix(seed_, counter_++); }

  /// Uniform in the open interval (0,1).
  double uniform() {
    return (double(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Inclusive uniform integer in [lo, hi].
  int uniform_int(int lo, int hi) {
    return lo + int(next_u64() % std::uint64_t(hi - lo + 1));
  }

  /// Standard normal via the inverse CDF, keeping the stream deterministic.
  double normal() { return normal_quantile(uniform()); }

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

}  // namespace sgslope
