#pragma once

#include <cstdint>
#include <initializer_list>
#include <limits>

namespace margin_guard {

/// splitmix64 finalizer; used to derive independent stream seeds.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Seed for the stream identified by `key` under `master`. Distinct keys give
/// statistically independent streams, so work can be split across trials,
/// indices, or grid values without sharing generator state.
std::uint64_t derive_stream(std::uint64_t master, std::initializer_list<std::uint64_t> key) noexcept;

/// xoshiro256** generator. Satisfies UniformRandomBitGenerator. Variate
/// transforms are implemented here rather than with <random> distributions so
/// that output does not depend on the standard library in use.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }
  result_type operator()() noexcept;

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept;
  /// Uniform on (0, 1].
  double uniform_open_zero() noexcept { return 1.0 - uniform(); }
  /// Standard normal (Box-Muller, pairs cached).
  double normal() noexcept;

 private:
  std::uint64_t s_[4];
  double cached_normal_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace margin_guard
