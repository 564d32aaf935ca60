#include "margin_guard/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "margin_guard/errors.hpp"

namespace margin_guard {

namespace {

std::vector<double> flatten(const std::vector<std::vector<double>>& rows, std::size_t& dim,
                            const char* what) {
  if (rows.empty()) {
    throw InputError(std::string(what) + ": no rows");
  }
  dim = rows.front().size();
  std::vector<double> flat;
  flat.reserve(rows.size() * dim);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != dim) {
      throw InputError(std::string(what) + ": row " + std::to_string(i + 1) + " has dimension " +
                       std::to_string(rows[i].size()) + ", expected " + std::to_string(dim));
    }
    flat.insert(flat.end(), rows[i].begin(), rows[i].end());
  }
  return flat;
}

std::vector<std::vector<double>> unflatten(const std::vector<double>& flat, std::size_t dim) {
  std::vector<std::vector<double>> rows;
  rows.reserve(flat.size() / dim);
  for (auto it = flat.begin(); it != flat.end(); it += static_cast<std::ptrdiff_t>(dim)) {
    rows.emplace_back(it, it + static_cast<std::ptrdiff_t>(dim));
  }
  return rows;
}

void check_finite(const std::vector<double>& coords, const char* what) {
  for (double v : coords) {
    if (!std::isfinite(v)) {
      throw InputError(std::string(what) + ": non-finite coordinate");
    }
  }
}

}  // namespace

PointConfig::PointConfig(std::size_t dim, std::vector<double> coords)
    : d_(dim), coords_(std::move(coords)) {
  if (d_ == 0) {
    throw InputError("point configuration: dimension must be at least 1");
  }
  if (coords_.size() % d_ != 0) {
    throw InputError("point configuration: coordinate count is not a multiple of the dimension");
  }
  n_ = coords_.size() / d_;
  if (n_ < 2) {
    throw InputError("point configuration: at least 2 points are required, got " +
                     std::to_string(n_));
  }
  check_finite(coords_, "point configuration");
}

PointConfig PointConfig::from_rows(const std::vector<std::vector<double>>& rows) {
  std::size_t dim = 0;
  auto flat = flatten(rows, dim, "point configuration");
  return PointConfig(dim, std::move(flat));
}

std::vector<std::vector<double>> PointConfig::rows() const { return unflatten(coords_, d_); }

PointConfig PointConfig::with_point(std::size_t i, std::span<const double> p) const {
  PointConfig out = *this;
  std::copy(p.begin(), p.end(), out.coords_.begin() + static_cast<std::ptrdiff_t>(i * d_));
  return out;
}

CenterSet::CenterSet(std::size_t dim, std::vector<double> coords)
    : d_(dim), coords_(std::move(coords)) {
  if (d_ == 0) {
    throw InputError("center set: dimension must be at least 1");
  }
  if (coords_.size() % d_ != 0) {
    throw InputError("center set: coordinate count is not a multiple of the dimension");
  }
  k_ = coords_.size() / d_;
  if (k_ < 2) {
    throw InputError("center set: at least 2 centers are required, got " + std::to_string(k_));
  }
  check_finite(coords_, "center set");
  for (std::size_t a = 0; a < k_; ++a) {
    for (std::size_t b = a + 1; b < k_; ++b) {
      if (squared_distance(center(a), center(b)) == 0.0) {
        throw InputError("center set: centers " + std::to_string(a + 1) + " and " +
                         std::to_string(b + 1) + " coincide");
      }
    }
  }
}

CenterSet CenterSet::from_rows(const std::vector<std::vector<double>>& rows) {
  std::size_t dim = 0;
  auto flat = flatten(rows, dim, "center set");
  return CenterSet(dim, std::move(flat));
}

std::vector<std::vector<double>> CenterSet::rows() const { return unflatten(coords_, d_); }

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t t = 0; t < a.size(); ++t) {
    const double diff = a[t] - b[t];
    s += diff * diff;
  }
  return s;
}

double distance(std::span<const double> a, std::span<const double> b) {
  return std::sqrt(squared_distance(a, b));
}

std::size_t nearest_center(std::span<const double> point, const CenterSet& centers) {
  std::size_t best = 0;
  double best_sq = squared_distance(point, centers.center(0));
  for (std::size_t j = 1; j < centers.size(); ++j) {
    const double sq = squared_distance(point, centers.center(j));
    if (sq < best_sq) {  // strict: ties keep the lower index
      best_sq = sq;
      best = j;
    }
  }
  return best;
}

namespace {

double margin_unchecked(std::span<const double> point, const CenterSet& centers,
                        std::size_t label) {
  const double own = distance(point, centers.center(label));
  double gamma = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < centers.size(); ++j) {
    if (j != label) {
      gamma = std::min(gamma, distance(point, centers.center(j)) - own);
    }
  }
  // sqrt is monotone, so the nearest label never yields a negative gap.
  return std::max(gamma, 0.0);
}

}  // namespace

double margin(std::span<const double> point, const CenterSet& centers, std::size_t label) {
  if (point.size() != centers.dim()) {
    throw InputError("margin: point dimension does not match centers");
  }
  if (label >= centers.size() || nearest_center(point, centers) != label) {
    throw InvariantViolation("margin: label " + std::to_string(label + 1) +
                             " is not the nearest-center label of the point");
  }
  return margin_unchecked(point, centers, label);
}

Assignment assign_nearest(const PointConfig& config, const CenterSet& centers) {
  if (config.dim() != centers.dim()) {
    throw InputError("dimension mismatch: points have d=" + std::to_string(config.dim()) +
                     ", centers have d=" + std::to_string(centers.dim()));
  }
  Assignment out;
  out.labels.resize(config.size());
  out.margins.resize(config.size());
  out.min_margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < config.size(); ++i) {
    const auto p = config.point(i);
    out.labels[i] = nearest_center(p, centers);
    out.margins[i] = margin_unchecked(p, centers, out.labels[i]);
    out.min_margin = std::min(out.min_margin, out.margins[i]);
  }
  return out;
}

double perturbation_size(const PointConfig& a, const PointConfig& b) {
  if (a.size() != b.size() || a.dim() != b.dim()) {
    throw InputError("perturbation size: configurations differ in shape (" +
                     std::to_string(a.size()) + "x" + std::to_string(a.dim()) + " vs " +
                     std::to_string(b.size()) + "x" + std::to_string(b.dim()) + ")");
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    worst = std::max(worst, distance(a.point(i), b.point(i)));
  }
  return worst;
}

std::vector<std::size_t> fragile_indices(const Assignment& assignment, double threshold) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    if (assignment.margins[i] < threshold) {
      out.push_back(i);
    }
  }
  return out;
}

}  // namespace margin_guard
