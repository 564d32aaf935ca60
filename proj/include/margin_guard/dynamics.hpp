#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "margin_guard/geometry.hpp"
#include "margin_guard/partition.hpp"

namespace margin_guard {

/// Snapshots X(0..T) of the same labeled points, evaluated against centers
/// that stay fixed for the whole horizon.
class Trajectory {
 public:
  /// Throws InputError if there are no snapshots or shapes differ.
  Trajectory(std::vector<PointConfig> snapshots, CenterSet centers);

  std::size_t horizon() const noexcept { return snapshots_.size() - 1; }  // T
  const std::vector<PointConfig>& snapshots() const noexcept { return snapshots_; }
  const PointConfig& at(std::size_t t) const { return snapshots_.at(t); }
  const CenterSet& centers() const noexcept { return centers_; }

 private:
  std::vector<PointConfig> snapshots_;
  CenterSet centers_;
};

/// delta_t = |X(t+1) - X(t)| for t = 0..T-1. Throws InputError for T = 0.
std::vector<double> step_sizes(const Trajectory& traj);

struct DriftCheck {
  double drift = 0.0;   // |X(t) - X(s)|
  double budget = 0.0;  // sum_{r=s}^{t-1} delta_r
  bool bound_holds = false;
};

/// Requires 0 <= s < t <= T.
DriftCheck cumulative_drift_check(const Trajectory& traj, std::size_t s, std::size_t t);

struct PersistenceCertificate {
  std::size_t horizon = 0;
  double cumulative_budget = 0.0;
  double initial_radius_lower_bound = 0.0;  // gamma_min(X(0)) / 2
  bool certified = false;
};

/// Certifies P(r) = P(0) for all r <= t when the cumulative step budget stays
/// below the margin bound on the initial stability radius. One-sided: an
/// uncertified horizon may still have an unchanged partition.
PersistenceCertificate persistence_certificate(const Trajectory& traj, std::size_t t);

/// One certificate per horizon t = 0..T, sharing one pass over the steps.
std::vector<PersistenceCertificate> persistence_certificates(const Trajectory& traj);

/// Entry r is true iff delta_r < gamma_min(X(r)) / 2 (or delta_r == 0).
std::vector<bool> stepwise_stability_check(const Trajectory& traj);

/// P(t) for every snapshot.
std::vector<Partition> partitions(const Trajectory& traj);

/// First t >= 1 with d(P(0), P(t)) >= eta, or nullopt if that never happens
/// within the horizon. Throws InputError unless 0 < eta <= 1.
std::optional<std::size_t> instability_time(const Trajectory& traj, double eta);

}  // namespace margin_guard
