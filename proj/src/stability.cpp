#include "margin_guard/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "margin_guard/errors.hpp"

namespace margin_guard {

namespace {

void check_epsilon(double epsilon) {
  if (!(epsilon >= 0.0)) {
    throw InputError("epsilon must be a nonnegative number");
  }
}

// Signed distance of `point` past the (own, other) bisector; negative while
// the point is on its own center's side.
double bisector_gap(std::span<const double> point, std::span<const double> own,
                    std::span<const double> other) {
  double dot = 0.0;
  double norm_sq = 0.0;
  for (std::size_t t = 0; t < point.size(); ++t) {
    const double axis = other[t] - own[t];
    const double mid = 0.5 * (other[t] + own[t]);
    dot += (point[t] - mid) * axis;
    norm_sq += axis * axis;
  }
  return dot / std::sqrt(norm_sq);
}

}  // namespace

bool no_switch_certificate(double min_margin, double epsilon) {
  check_epsilon(epsilon);
  if (epsilon == 0.0) {
    return true;
  }
  return epsilon < min_margin / 2.0;
}

bool no_switch_certificate(const Assignment& assignment, double epsilon) {
  return no_switch_certificate(assignment.min_margin, epsilon);
}

std::vector<std::size_t> switch_candidates(const Assignment& assignment, double epsilon) {
  check_epsilon(epsilon);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    if (assignment.margins[i] <= 2.0 * epsilon) {
      out.push_back(i);
    }
  }
  return out;
}

SwitchRadius exact_switch_radius_detail(std::span<const double> point, const CenterSet& centers,
                                        std::size_t label) {
  if (point.size() != centers.dim()) {
    throw InputError("switch radius: point dimension does not match centers");
  }
  if (label >= centers.size() || nearest_center(point, centers) != label) {
    throw InvariantViolation("switch radius: label " + std::to_string(label + 1) +
                             " is not the nearest-center label of the point");
  }
  SwitchRadius best{std::numeric_limits<double>::infinity(), label};
  for (std::size_t j = 0; j < centers.size(); ++j) {
    if (j == label) continue;
    const double r = std::max(0.0, -bisector_gap(point, centers.center(label), centers.center(j)));
    if (r < best.radius) {
      best = {r, j};
    }
  }
  return best;
}

double exact_switch_radius(std::span<const double> point, const CenterSet& centers,
                           std::size_t label) {
  return exact_switch_radius_detail(point, centers, label).radius;
}

std::optional<PartitionRadiusWitness> empirical_partition_radius_search(
    const PointConfig& config, const CenterSet& centers, const RadiusSearchOptions& options) {
  const Assignment base = assign_nearest(config, centers);
  const Partition before = induced_partition(base);
  const std::size_t d = config.dim();

  std::optional<PartitionRadiusWitness> best;
  std::vector<double> moved(d);
  std::vector<std::size_t> labels = base.labels;

  for (std::size_t i = 0; i < config.size(); ++i) {
    const auto x = config.point(i);
    const std::size_t own = base.labels[i];
    for (std::size_t j = 0; j < centers.size(); ++j) {
      if (j == own) continue;
      const auto c_own = centers.center(own);
      const auto c_other = centers.center(j);
      const double gap = std::max(0.0, -bisector_gap(x, c_own, c_other));
      const double axis_norm = distance(c_own, c_other);

      double slack = std::max(options.relative_slack * gap, options.slack_floor);
      std::size_t new_label = own;
      // Rounding can leave the point on the bisector; widen the step until the
      // crossing is strict.
      for (int attempt = 0; attempt < 64 && new_label == own; ++attempt, slack *= 2.0) {
        const double step = gap + slack;
        for (std::size_t t = 0; t < d; ++t) {
          moved[t] = x[t] + step * (c_other[t] - c_own[t]) / axis_norm;
        }
        new_label = nearest_center(moved, centers);
      }
      if (new_label == own) continue;

      const double radius = distance(x, moved);
      if (best && radius >= best->radius) continue;

      labels[i] = new_label;
      Partition after = Partition::from_block_ids(labels);
      labels[i] = own;
      if (after == before) continue;

      best = PartitionRadiusWitness{radius, i, j, new_label, config.with_point(i, moved),
                                    std::move(after)};
    }
  }

  if (best) {
    const Partition check = induced_partition(assign_nearest(best->perturbed, centers));
    if (check == before || !(check == best->after) ||
        perturbation_size(config, best->perturbed) != best->radius) {
      throw InvariantViolation("radius search: witness does not reproduce a partition change");
    }
  }
  return best;
}

StabilityReport analyze_stability(const PointConfig& config, const CenterSet& centers,
                                  bool run_search, const RadiusSearchOptions& options) {
  Assignment assignment = assign_nearest(config, centers);
  Partition partition = induced_partition(assignment);
  const double gamma_min = assignment.min_margin;
  StabilityReport report{.assignment = std::move(assignment),
                         .partition = std::move(partition),
                         .min_margin = gamma_min,
                         .margin_lower_bound_radius = gamma_min / 2.0,
                         .per_point_switch_radius = {},
                         .per_point_competitor = {},
                         .assignment_radius = std::numeric_limits<double>::infinity(),
                         .empirical_partition_radius_upper = std::nullopt,
                         .fragile = {}};
  for (std::size_t i = 0; i < config.size(); ++i) {
    const auto r = exact_switch_radius_detail(config.point(i), centers, report.assignment.labels[i]);
    report.per_point_switch_radius.push_back(r.radius);
    report.per_point_competitor.push_back(r.competitor);
    report.assignment_radius = std::min(report.assignment_radius, r.radius);
  }
  report.fragile = fragile_indices(report.assignment);
  if (run_search) {
    report.empirical_partition_radius_upper =
        empirical_partition_radius_search(config, centers, options);
  }
  return report;
}

}  // namespace margin_guard
