#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "margin_guard/geometry.hpp"
#include "margin_guard/rng.hpp"

namespace margin_guard {

/// Independent per-point noise: uniform on the ball of radius rho, or
/// isotropic Gaussian with per-coordinate standard deviation sigma.
class PerturbationModel {
 public:
  enum class Kind { bounded_ball, gaussian };

  /// Throws InputError unless rho > 0.
  static PerturbationModel bounded_ball(double rho);
  /// Throws InputError unless sigma > 0.
  static PerturbationModel gaussian(double sigma);
  /// sigma = 0; every sample is the zero vector. Only useful in tests.
  static PerturbationModel zero_gaussian();

  Kind kind() const noexcept { return kind_; }
  double scale() const noexcept { return scale_; }  // rho or sigma
  std::string name() const;

  /// One noise vector of dimension `dim`.
  std::vector<double> sample(std::size_t dim, Rng& rng) const;

 private:
  PerturbationModel(Kind kind, double scale) : kind_(kind), scale_(scale) {}
  Kind kind_;
  double scale_;
};

/// X' = X + noise with an independent stream per (seed, trial, index). For
/// the bounded model the realized displacement |x'_i - x_i| never exceeds rho,
/// including after rounding of the addition.
PointConfig sample_perturbation(const PerturbationModel& model, const PointConfig& config,
                                std::uint64_t seed, std::uint64_t trial = 0);

/// P(|noise| >= gamma/2): the exact tail of the noise norm.
///   bounded ball: 1 - (gamma / (2 rho))^d for gamma/2 < rho, else 0
///   gaussian:     Q(d/2, gamma^2 / (8 sigma^2))
/// Throws InputError on negative gamma.
double switch_probability_bound(double gamma, const PerturbationModel& model, std::size_t dim);

/// Upper bound on the expected number of label switches: sum of per-index tails.
double expected_switch_bound(const Assignment& assignment, const PerturbationModel& model,
                             std::size_t dim);

/// min(1, 2/(n-1) * expected_switch_bound).
double expected_distance_bound(const Assignment& assignment, const PerturbationModel& model,
                               std::size_t dim);

struct TrialRecord {
  std::size_t trial = 0;
  std::size_t switched = 0;
  double distance = 0.0;
};

struct MonteCarloOptions {
  unsigned workers = 1;
  bool keep_trace = false;
};

struct MonteCarloReport {
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::string model;
  double model_scale = 0.0;

  std::vector<double> per_index_switch_frequency;
  std::vector<double> per_index_bound;
  double mean_switched_count = 0.0;  // sum of per-index frequencies
  double switched_count_stderr = 0.0;
  double mean_partition_distance = 0.0;
  double partition_distance_stderr = 0.0;
  double max_partition_distance = 0.0;
  double expected_switch_bound = 0.0;
  double expected_distance_bound = 0.0;

  // Per-trial self-checks; both stay zero unless the geometry code is wrong.
  std::size_t necessity_violations = 0;      // switched with |x'_i - x_i| < gamma_i / 2
  std::size_t distance_bound_violations = 0;  // d(P,P') > min(1, 2 N_sw / (n-1))

  std::vector<TrialRecord> trace;  // filled when keep_trace
};

/// Runs `trials` independent perturbations and compares the observed switch
/// frequencies and partition distances with the analytic bounds. Results do
/// not depend on `options.workers`. Throws InputError when trials == 0.
MonteCarloReport monte_carlo(const PointConfig& config, const CenterSet& centers,
                             const PerturbationModel& model, std::size_t trials,
                             std::uint64_t seed, const MonteCarloOptions& options = {});

struct SweepRow {
  double epsilon = 0.0;
  double mean_distance = 0.0;
  double max_distance = 0.0;
  bool below_threshold = false;  // epsilon < gamma_min / 2
};

struct SweepResult {
  double min_margin = 0.0;
  double threshold = 0.0;  // gamma_min / 2
  std::size_t trials = 0;
  std::vector<SweepRow> rows;
};

/// S(epsilon) = d(A(X), A(X')) under bounded-ball noise of radius epsilon, for
/// each grid value. Each row draws from streams keyed by (seed, epsilon), so
/// adding grid values never changes existing rows. Throws InputError on a grid
/// with fewer than 2 values or nonpositive entries.
SweepResult stability_sweep(const PointConfig& config, const CenterSet& centers,
                            std::span<const double> grid, std::size_t trials, std::uint64_t seed,
                            unsigned workers = 1);

}  // namespace margin_guard
