#include "margin_guard/dynamics.hpp"

#include <string>

#include "margin_guard/errors.hpp"
#include "margin_guard/stability.hpp"

namespace margin_guard {

Trajectory::Trajectory(std::vector<PointConfig> snapshots, CenterSet centers)
    : snapshots_(std::move(snapshots)), centers_(std::move(centers)) {
  if (snapshots_.empty()) {
    throw InputError("trajectory: no snapshots");
  }
  const auto& first = snapshots_.front();
  if (first.dim() != centers_.dim()) {
    throw InputError("trajectory: snapshot dimension " + std::to_string(first.dim()) +
                     " does not match center dimension " + std::to_string(centers_.dim()));
  }
  for (std::size_t t = 1; t < snapshots_.size(); ++t) {
    if (snapshots_[t].size() != first.size() || snapshots_[t].dim() != first.dim()) {
      throw InputError("trajectory: snapshot t=" + std::to_string(t) +
                       " has a different shape than t=0");
    }
  }
}

std::vector<double> step_sizes(const Trajectory& traj) {
  if (traj.horizon() == 0) {
    throw InputError("step sizes: trajectory has a single snapshot");
  }
  std::vector<double> out;
  out.reserve(traj.horizon());
  for (std::size_t t = 0; t < traj.horizon(); ++t) {
    out.push_back(perturbation_size(traj.at(t + 1), traj.at(t)));
  }
  return out;
}

DriftCheck cumulative_drift_check(const Trajectory& traj, std::size_t s, std::size_t t) {
  if (s >= t || t > traj.horizon()) {
    throw InputError("drift check: need 0 <= s < t <= T (s=" + std::to_string(s) +
                     ", t=" + std::to_string(t) + ", T=" + std::to_string(traj.horizon()) + ")");
  }
  DriftCheck out;
  out.drift = perturbation_size(traj.at(t), traj.at(s));
  for (std::size_t r = s; r < t; ++r) {
    out.budget += perturbation_size(traj.at(r + 1), traj.at(r));
  }
  out.bound_holds = out.drift <= out.budget;
  return out;
}

std::vector<PersistenceCertificate> persistence_certificates(const Trajectory& traj) {
  const double bound = assign_nearest(traj.at(0), traj.centers()).min_margin / 2.0;
  std::vector<PersistenceCertificate> out;
  double budget = 0.0;
  for (std::size_t t = 0; t <= traj.horizon(); ++t) {
    if (t > 0) {
      budget += perturbation_size(traj.at(t), traj.at(t - 1));
    }
    // A zero budget means X(r) = X(0) for all r <= t, which certifies even
    // when gamma_min = 0.
    out.push_back({t, budget, bound, no_switch_certificate(2.0 * bound, budget)});
  }
  return out;
}

PersistenceCertificate persistence_certificate(const Trajectory& traj, std::size_t t) {
  if (t > traj.horizon()) {
    throw InputError("persistence: horizon " + std::to_string(t) + " exceeds T = " +
                     std::to_string(traj.horizon()));
  }
  return persistence_certificates(traj)[t];
}

std::vector<bool> stepwise_stability_check(const Trajectory& traj) {
  const auto steps = step_sizes(traj);
  std::vector<bool> out;
  out.reserve(steps.size());
  for (std::size_t r = 0; r < steps.size(); ++r) {
    const double gamma = assign_nearest(traj.at(r), traj.centers()).min_margin;
    out.push_back(no_switch_certificate(gamma, steps[r]));
  }
  return out;
}

std::vector<Partition> partitions(const Trajectory& traj) {
  std::vector<Partition> out;
  out.reserve(traj.snapshots().size());
  for (const auto& x : traj.snapshots()) {
    out.push_back(induced_partition(assign_nearest(x, traj.centers())));
  }
  return out;
}

std::optional<std::size_t> instability_time(const Trajectory& traj, double eta) {
  if (!(eta > 0.0 && eta <= 1.0)) {
    throw InputError("instability time: eta must lie in (0, 1]");
  }
  const Partition initial = induced_partition(assign_nearest(traj.at(0), traj.centers()));
  for (std::size_t t = 1; t <= traj.horizon(); ++t) {
    const Partition p = induced_partition(assign_nearest(traj.at(t), traj.centers()));
    if (partition_distance(initial, p) >= eta) {
      return t;
    }
  }
  return std::nullopt;
}

}  // namespace margin_guard
