#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace depjudge {

/// splitmix64 mixing step; used for stable child-seed derivation.
std::uint64_t splitmix64(std::uint64_t x);

/// Stable child seed from (master, a, b), e.g. (seed, replication, question).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b);

/// mt19937_64 with fixed sampling routines layered on top, so streams do not
/// depend on the standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform integer in [lo, hi], inclusive. Unbiased via rejection.
  int uniform_int(int lo, int hi);

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform_real();

  /// Box-Muller normal draw (no spare caching).
  double gaussian(double mean, double stddev);

  /// Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::vector<T>& values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(uniform_int(0, static_cast<int>(i) - 1));
      std::swap(values[i - 1], values[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace depjudge
