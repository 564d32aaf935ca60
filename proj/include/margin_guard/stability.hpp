#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "margin_guard/geometry.hpp"
#include "margin_guard/partition.hpp"

namespace margin_guard {

/// True iff every perturbation of size <= epsilon provably keeps every label:
/// epsilon < min_margin / 2 (strict), or epsilon == 0 (the only admissible
/// perturbation is the identity). Throws InputError on negative or NaN epsilon.
bool no_switch_certificate(double min_margin, double epsilon);
bool no_switch_certificate(const Assignment& assignment, double epsilon);

/// Indices with margin <= 2*epsilon. Every other index keeps its label under
/// any perturbation of size <= epsilon.
std::vector<std::size_t> switch_candidates(const Assignment& assignment, double epsilon);

struct SwitchRadius {
  double radius = 0.0;
  std::size_t competitor = 0;  // center whose bisector is nearest
};

/// Distance from `point` to the nearest bisector between its own center and
/// any other center: the smallest single-point displacement that reaches a
/// decision boundary. Always >= margin/2.
SwitchRadius exact_switch_radius_detail(std::span<const double> point, const CenterSet& centers,
                                        std::size_t label);
double exact_switch_radius(std::span<const double> point, const CenterSet& centers,
                           std::size_t label);

struct RadiusSearchOptions {
  double relative_slack = 1e-9;
  double slack_floor = 1e-12;
};

/// Cheapest partition-changing single-point move found by the search.
struct PartitionRadiusWitness {
  double radius = 0.0;  // == perturbation_size(config, perturbed)
  std::size_t moved_index = 0;
  std::size_t competitor = 0;  // center whose bisector was crossed
  std::size_t new_label = 0;
  PointConfig perturbed;
  Partition after;
};

/// Upper bound on the partition stability radius from single-point moves.
/// For every index i and competing center j, pushes x_i just past the
/// (own, j) bisector along the center-difference direction and keeps the
/// cheapest move whose induced partition differs from the original. Moves
/// that relabel a point without changing the grouping are skipped. Returns
/// nullopt when no single move changes the partition.
std::optional<PartitionRadiusWitness> empirical_partition_radius_search(
    const PointConfig& config, const CenterSet& centers, const RadiusSearchOptions& options = {});

inline constexpr const char* kSearchBoundKind = "upper bound (single-move adversary)";

struct StabilityReport {
  Assignment assignment;
  Partition partition;
  double min_margin = 0.0;
  double margin_lower_bound_radius = 0.0;  // min_margin / 2
  std::vector<double> per_point_switch_radius;
  std::vector<std::size_t> per_point_competitor;
  double assignment_radius = 0.0;  // min of per_point_switch_radius
  std::optional<PartitionRadiusWitness> empirical_partition_radius_upper;
  std::vector<std::size_t> fragile;
};

StabilityReport analyze_stability(const PointConfig& config, const CenterSet& centers,
                                  bool run_search = true, const RadiusSearchOptions& options = {});

}  // namespace margin_guard
