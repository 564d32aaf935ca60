#include "margin_guard/stochastic.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <thread>

#include "margin_guard/errors.hpp"
#include "margin_guard/partition.hpp"
#include "margin_guard/special_functions.hpp"

namespace margin_guard {

namespace {

// Splits [0, count) into contiguous chunks, one per worker. Each index is
// processed exactly once; callers write results into per-index slots so the
// final reduction can run in a fixed order.
void parallel_chunks(std::size_t count, unsigned workers,
                     const std::function<void(std::size_t, std::size_t, unsigned)>& body) {
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  if (workers == 1) {
    body(0, count, 0);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (count + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t begin = std::min(count, w * chunk);
    const std::size_t end = std::min(count, begin + chunk);
    pool.emplace_back([&body, begin, end, w] { body(begin, end, w); });
  }
}

double pairs(std::size_t n) { return static_cast<double>(n) * static_cast<double>(n - 1) / 2.0; }

}  // namespace

PerturbationModel PerturbationModel::bounded_ball(double rho) {
  if (!(rho > 0.0) || !std::isfinite(rho)) {
    throw InputError("bounded noise: radius rho must be positive");
  }
  return {Kind::bounded_ball, rho};
}

PerturbationModel PerturbationModel::gaussian(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw InputError("gaussian noise: sigma must be positive");
  }
  return {Kind::gaussian, sigma};
}

PerturbationModel PerturbationModel::zero_gaussian() { return {Kind::gaussian, 0.0}; }

std::string PerturbationModel::name() const {
  return kind_ == Kind::bounded_ball ? "bounded_disk" : "gaussian";
}

std::vector<double> PerturbationModel::sample(std::size_t dim, Rng& rng) const {
  std::vector<double> v(dim);
  if (kind_ == Kind::gaussian) {
    for (double& x : v) x = scale_ * rng.normal();
    return v;
  }
  double norm = 0.0;
  while (norm == 0.0) {
    norm = 0.0;
    for (double& x : v) {
      x = rng.normal();
      norm += x * x;
    }
    norm = std::sqrt(norm);
  }
  // Radius density proportional to r^(d-1) on [0, rho].
  const double radius = scale_ * std::pow(rng.uniform(), 1.0 / static_cast<double>(dim));
  for (double& x : v) x *= radius / norm;
  return v;
}

PointConfig sample_perturbation(const PerturbationModel& model, const PointConfig& config,
                                std::uint64_t seed, std::uint64_t trial) {
  const std::size_t d = config.dim();
  std::vector<double> coords(config.coords().begin(), config.coords().end());
  for (std::size_t i = 0; i < config.size(); ++i) {
    Rng rng(derive_stream(seed, {trial, i}));
    auto noise = model.sample(d, rng);
    const auto x = config.point(i);
    std::span<double> out(coords.data() + i * d, d);
    for (;;) {
      for (std::size_t t = 0; t < d; ++t) out[t] = x[t] + noise[t];
      if (model.kind() != PerturbationModel::Kind::bounded_ball ||
          distance(x, out) <= model.scale()) {
        break;
      }
      // Rounding in x + noise overshot the ball; pull the noise in slightly.
      for (double& v : noise) v *= 1.0 - 0x1.0p-40;
    }
  }
  return PointConfig(d, std::move(coords));
}

double switch_probability_bound(double gamma, const PerturbationModel& model, std::size_t dim) {
  if (!(gamma >= 0.0)) {
    throw InputError("switch probability: margin must be nonnegative");
  }
  if (dim == 0) {
    throw InputError("switch probability: dimension must be at least 1");
  }
  const double half = gamma / 2.0;
  if (model.kind() == PerturbationModel::Kind::gaussian) {
    return gaussian_norm_tail(half, model.scale(), static_cast<unsigned>(dim));
  }
  if (half >= model.scale()) return 0.0;
  return 1.0 - std::pow(half / model.scale(), static_cast<double>(dim));
}

double expected_switch_bound(const Assignment& assignment, const PerturbationModel& model,
                             std::size_t dim) {
  double sum = 0.0;
  for (double g : assignment.margins) sum += switch_probability_bound(g, model, dim);
  return sum;
}

double expected_distance_bound(const Assignment& assignment, const PerturbationModel& model,
                               std::size_t dim) {
  const std::size_t n = assignment.size();
  if (n < 2) {
    throw InputError("expected distance bound: need n >= 2");
  }
  return std::min(1.0, 2.0 / static_cast<double>(n - 1) *
                           expected_switch_bound(assignment, model, dim));
}

MonteCarloReport monte_carlo(const PointConfig& config, const CenterSet& centers,
                             const PerturbationModel& model, std::size_t trials,
                             std::uint64_t seed, const MonteCarloOptions& options) {
  if (trials == 0) {
    throw InputError("monte carlo: trials must be at least 1");
  }
  const Assignment base = assign_nearest(config, centers);
  const std::size_t n = config.size();
  const std::size_t k = centers.size();
  const std::size_t d = config.dim();
  const double pair_count = pairs(n);

  std::vector<std::size_t> switched(trials);
  std::vector<double> dist(trials);
  const unsigned workers = std::max(1u, options.workers);
  std::vector<std::vector<std::size_t>> index_counts(workers, std::vector<std::size_t>(n, 0));
  std::vector<std::size_t> necessity(workers, 0);
  std::vector<std::size_t> hard_bound(workers, 0);

  parallel_chunks(trials, workers, [&](std::size_t begin, std::size_t end, unsigned w) {
    std::vector<std::size_t> labels(n);
    for (std::size_t t = begin; t < end; ++t) {
      const PointConfig moved = sample_perturbation(model, config, seed, t);
      std::size_t count = 0;
      for (std::size_t i = 0; i < n; ++i) {
        labels[i] = nearest_center(moved.point(i), centers);
        if (labels[i] != base.labels[i]) {
          ++count;
          ++index_counts[w][i];
          if (distance(config.point(i), moved.point(i)) < base.margins[i] / 2.0) {
            ++necessity[w];
          }
        }
      }
      const double dpp =
          static_cast<double>(disagreeing_pairs_by_contingency(base.labels, labels, k)) /
          pair_count;
      if (dpp > switched_index_distance_bound(count, n)) {
        ++hard_bound[w];
      }
      switched[t] = count;
      dist[t] = dpp;
    }
  });

  MonteCarloReport r;
  r.trials = trials;
  r.seed = seed;
  r.model = model.name();
  r.model_scale = model.scale();
  const double T = static_cast<double>(trials);

  r.per_index_switch_frequency.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t c = 0;
    for (const auto& counts : index_counts) c += counts[i];
    r.per_index_switch_frequency[i] = static_cast<double>(c) / T;
    r.mean_switched_count += r.per_index_switch_frequency[i];
  }
  for (unsigned w = 0; w < workers; ++w) {
    r.necessity_violations += necessity[w];
    r.distance_bound_violations += hard_bound[w];
  }

  double sum_d = 0.0;
  for (double v : dist) {
    sum_d += v;
    r.max_partition_distance = std::max(r.max_partition_distance, v);
  }
  r.mean_partition_distance = sum_d / T;
  if (trials > 1) {
    double ss_n = 0.0;
    double ss_d = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
      const double a = static_cast<double>(switched[t]) - r.mean_switched_count;
      const double b = dist[t] - r.mean_partition_distance;
      ss_n += a * a;
      ss_d += b * b;
    }
    r.switched_count_stderr = std::sqrt(ss_n / (T - 1.0) / T);
    r.partition_distance_stderr = std::sqrt(ss_d / (T - 1.0) / T);
  }

  r.per_index_bound.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    r.per_index_bound[i] = switch_probability_bound(base.margins[i], model, d);
  }
  r.expected_switch_bound = expected_switch_bound(base, model, d);
  r.expected_distance_bound = expected_distance_bound(base, model, d);

  if (options.keep_trace) {
    r.trace.reserve(trials);
    for (std::size_t t = 0; t < trials; ++t) r.trace.push_back({t, switched[t], dist[t]});
  }
  return r;
}

SweepResult stability_sweep(const PointConfig& config, const CenterSet& centers,
                            std::span<const double> grid, std::size_t trials, std::uint64_t seed,
                            unsigned workers) {
  if (grid.size() < 2) {
    throw InputError("sweep: the epsilon grid needs at least 2 values");
  }
  if (trials == 0) {
    throw InputError("sweep: trials must be at least 1");
  }
  for (double eps : grid) {
    if (!(eps > 0.0) || !std::isfinite(eps)) {
      throw InputError("sweep: grid values must be positive");
    }
  }
  const Assignment base = assign_nearest(config, centers);
  SweepResult out;
  out.min_margin = base.min_margin;
  out.threshold = base.min_margin / 2.0;
  out.trials = trials;
  for (double eps : grid) {
    const auto model = PerturbationModel::bounded_ball(eps);
    const std::uint64_t row_seed = derive_stream(seed, {std::bit_cast<std::uint64_t>(eps)});
    const auto mc = monte_carlo(config, centers, model, trials, row_seed, {workers, false});
    out.rows.push_back({eps, mc.mean_partition_distance, mc.max_partition_distance,
                        eps < out.threshold});
  }
  return out;
}

}  // namespace margin_guard
