#include "margin_guard/counterexamples.hpp"

#include <cmath>
#include <numeric>
#include <vector>

#include "margin_guard/errors.hpp"

namespace margin_guard {

namespace {

CenterSet boundary_centers() { return CenterSet(2, {-1.0, 0.0, 1.0, 0.0}); }

// Anchors at indices 0 and 1, movers at indices 2.. with heights `heights`.
CounterexampleFixture anchored_crossing(std::string name, double epsilon, double delta,
                                        const std::vector<double>& heights) {
  std::vector<double> before{-2.0, 0.0, 2.0, 0.0};
  std::vector<double> after = before;
  for (double h : heights) {
    before.insert(before.end(), {delta, h});
    after.insert(after.end(), {-delta, h});
  }
  const std::size_t n = 2 + heights.size();

  std::vector<std::size_t> right(n - 1);
  right[0] = 1;
  std::iota(right.begin() + 1, right.end(), std::size_t{2});
  std::vector<std::size_t> left(n - 1);
  left[0] = 0;
  std::iota(left.begin() + 1, left.end(), std::size_t{2});

  CounterexampleFixture f{std::move(name),
                          epsilon,
                          delta,
                          heights.size(),
                          PointConfig(2, std::move(before)),
                          PointConfig(2, std::move(after)),
                          boundary_centers(),
                          Partition(n, {{0}, right}),
                          Partition(n, {left, {1}}),
                          0.0};
  f.perturbation_size = margin_guard::perturbation_size(f.config, f.perturbed);
  return f;
}

}  // namespace

CounterexampleFixture single_point_instability(double epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw InputError("single-point construction: epsilon must be positive");
  }
  return anchored_crossing("single_point", epsilon, epsilon / 4.0, {0.0});
}

CounterexampleFixture many_point_instability(double epsilon, std::size_t m) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw InputError("many-point construction: epsilon must be positive");
  }
  if (m < 1) {
    throw InputError("many-point construction: m must be at least 1");
  }
  std::vector<double> heights(m);
  std::iota(heights.begin(), heights.end(), 1.0);
  return anchored_crossing("many_point", epsilon, epsilon / 4.0, heights);
}

CounterexampleFixture near_boundary_instability(double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw InputError("near-boundary construction: delta must be positive");
  }
  return anchored_crossing("near_boundary", 0.0, delta, {0.0});
}

}  // namespace margin_guard
