#pragma once

// Test-only generators and brute-force oracles. Nothing here calls into the
// code paths it is used to check.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "margin_guard/geometry.hpp"

namespace margin_guard::testing {

inline std::vector<double> random_coords(std::mt19937_64& gen, std::size_t count, double lo,
                                         double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(count);
  for (double& x : v) x = u(gen);
  return v;
}

inline PointConfig random_config(std::mt19937_64& gen, std::size_t n, std::size_t d,
                                 double spread = 3.0) {
  return PointConfig(d, random_coords(gen, n * d, -spread, spread));
}

inline CenterSet random_centers(std::mt19937_64& gen, std::size_t k, std::size_t d,
                                double spread = 3.0) {
  return CenterSet(d, random_coords(gen, k * d, -spread, spread));
}

/// Uniform direction scaled to length `len`.
inline std::vector<double> random_displacement(std::mt19937_64& gen, std::size_t d, double len) {
  std::normal_distribution<double> z;
  std::vector<double> v(d);
  double norm = 0.0;
  while (norm == 0.0) {
    norm = 0.0;
    for (double& x : v) {
      x = z(gen);
      norm += x * x;
    }
    norm = std::sqrt(norm);
  }
  for (double& x : v) x *= len / norm;
  return v;
}

/// Every restricted growth string of length n (a[0] = 0, a[i] <= 1 + max a[<i]),
/// i.e. every set partition of [0, n) exactly once.
inline void for_each_set_partition(std::size_t n,
                                   const std::function<void(const std::vector<std::size_t>&)>& f) {
  std::vector<std::size_t> a(n, 0);
  std::vector<std::size_t> prefix_max(n, 0);
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == n) {
      f(a);
      return;
    }
    const std::size_t limit = i == 0 ? 0 : prefix_max[i - 1] + 1;
    for (std::size_t v = 0; v <= limit; ++v) {
      a[i] = v;
      prefix_max[i] = i == 0 ? v : std::max(prefix_max[i - 1], v);
      rec(i + 1);
    }
  };
  rec(0);
}

/// Every labeling of n indices with labels in [0, k).
inline void for_each_labeling(std::size_t n, std::size_t k,
                              const std::function<void(const std::vector<std::size_t>&)>& f) {
  std::vector<std::size_t> a(n, 0);
  for (;;) {
    f(a);
    std::size_t i = 0;
    while (i < n && ++a[i] == k) a[i++] = 0;
    if (i == n) return;
  }
}

/// Pairwise co-membership disagreement count straight from two label lists.
inline std::size_t brute_disagreements(const std::vector<std::size_t>& a,
                                       const std::vector<std::size_t>& b) {
  std::size_t c = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = i + 1; j < a.size(); ++j)
      if ((a[i] == a[j]) != (b[i] == b[j])) ++c;
  return c;
}

}  // namespace margin_guard::testing
