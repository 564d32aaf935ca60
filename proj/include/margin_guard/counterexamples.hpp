#pragma once

#include <cstddef>
#include <string>

#include "margin_guard/geometry.hpp"
#include "margin_guard/partition.hpp"

namespace margin_guard {

/// A configuration, a small perturbation of it, and the partitions both are
/// known to induce. Expected partitions are written down directly, not
/// recomputed, so they act as frozen ground truth for the assignment code.
///
/// All constructions use centers (-1,0), (1,0) with anchors (-2,0), (2,0) and
/// near-boundary points at x = delta that are pushed to x = -delta.
struct CounterexampleFixture {
  std::string construction;
  double parameter_epsilon = 0.0;  // 0 when the construction is delta-parameterized
  double delta = 0.0;
  std::size_t moved_count = 0;
  PointConfig config;
  PointConfig perturbed;
  CenterSet centers;
  Partition expected_before;
  Partition expected_after;
  double perturbation_size = 0.0;
};

/// Three points; the third sits at (delta, 0) with delta = epsilon/4 and
/// crosses to (-delta, 0). Throws InputError unless epsilon > 0.
CounterexampleFixture single_point_instability(double epsilon);

/// Anchors plus m points (delta, i) crossing to (-delta, i), delta = epsilon/4.
CounterexampleFixture many_point_instability(double epsilon, std::size_t m);

/// Same geometry as the single-point case, parameterized by the margin scale
/// delta directly.
CounterexampleFixture near_boundary_instability(double delta);

}  // namespace margin_guard
