#pragma once

// Reproducible random numbers.
//
// Generator: xoshiro256** (Blackman & Vigna), state seeded from a 64-bit seed
// by four successive SplitMix64 outputs. Doubles in [0, 1) are the top 53
// bits of one output times 2^-53. Standard normals come from the Box-Muller
// transform; the second variate of each pair is cached.

#include <cstdint>
#include <limits>

namespace activesub {

/// One SplitMix64 step: advances `state` and returns the next output.
std::uint64_t splitmix64_next(std::uint64_t& state) noexcept;

/// The SplitMix64 output finalizer applied to a single value.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Seed for trial `index` of stream `stream` under `master`:
///   h = mix64(master ^ mix64(stream + G)); return mix64(h ^ mix64(index + 2G))
/// with G = 0x9E3779B97F4A7C15. Distinct (stream, index) pairs give
/// statistically independent generator states.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index) noexcept;

class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept;

  /// Uniform on [0, 1).
  double uniform01() noexcept;
  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform01(); }
  /// Standard normal.
  double normal() noexcept;

 private:
  std::uint64_t s_[4];
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

}  // namespace activesub
