#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace margin_guard {

/// Ordered, labeled tuple of n points in R^d. The index identifies the point;
/// two configurations are comparable only index by index.
///
/// Coordinates are stored row-major (point i occupies [i*d, (i+1)*d)).
class PointConfig {
 public:
  /// Throws InputError unless n >= 2, d >= 1 and coords.size() == n*d.
  PointConfig(std::size_t dim, std::vector<double> coords);

  /// Builds from one vector per point; all rows must share the same length.
  static PointConfig from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t size() const noexcept { return n_; }
  std::size_t dim() const noexcept { return d_; }

  std::span<const double> point(std::size_t i) const noexcept {
    return {coords_.data() + i * d_, d_};
  }
  std::span<const double> coords() const noexcept { return coords_; }
  std::vector<std::vector<double>> rows() const;

  /// Copy with point i replaced.
  PointConfig with_point(std::size_t i, std::span<const double> p) const;

  bool operator==(const PointConfig&) const = default;

 private:
  std::size_t n_ = 0;
  std::size_t d_ = 0;
  std::vector<double> coords_;
};

/// Fixed, pairwise-distinct centers c_1..c_k, k >= 2.
class CenterSet {
 public:
  CenterSet(std::size_t dim, std::vector<double> coords);
  static CenterSet from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t size() const noexcept { return k_; }
  std::size_t dim() const noexcept { return d_; }
  std::span<const double> center(std::size_t j) const noexcept {
    return {coords_.data() + j * d_, d_};
  }
  std::vector<std::vector<double>> rows() const;

  bool operator==(const CenterSet&) const = default;

 private:
  std::size_t k_ = 0;
  std::size_t d_ = 0;
  std::vector<double> coords_;
};

/// Nearest-center labels and margins. Labels are 0-based center indices
/// internally; serialized forms use 1-based labels.
struct Assignment {
  std::vector<std::size_t> labels;
  std::vector<double> margins;
  double min_margin = 0.0;

  std::size_t size() const noexcept { return labels.size(); }
};

double distance(std::span<const double> a, std::span<const double> b);
double squared_distance(std::span<const double> a, std::span<const double> b);

/// Index of the nearest center; exact comparisons, ties go to the lowest index.
std::size_t nearest_center(std::span<const double> point, const CenterSet& centers);

/// Labels, margins and minimum margin for every point. Throws InputError on a
/// dimension mismatch.
Assignment assign_nearest(const PointConfig& config, const CenterSet& centers);

/// gamma = min over j != label of (|x - c_j| - |x - c_label|).
/// Throws InvariantViolation if `label` is not the nearest-center label.
double margin(std::span<const double> point, const CenterSet& centers, std::size_t label);

/// max_i |a_i - b_i|. Throws InputError on a shape mismatch.
double perturbation_size(const PointConfig& a, const PointConfig& b);

inline constexpr double kDefaultFragileMarginThreshold = 1e-12;

/// Indices whose margin is below `threshold`: assignments that a rounding
/// error could flip.
std::vector<std::size_t> fragile_indices(const Assignment& assignment,
                                         double threshold = kDefaultFragileMarginThreshold);

}  // namespace margin_guard
