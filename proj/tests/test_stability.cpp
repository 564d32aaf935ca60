#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "margin_guard/errors.hpp"
#include "margin_guard/partition.hpp"
#include "margin_guard/stability.hpp"
#include "support.hpp"

using namespace margin_guard;

namespace {

CenterSet pm_one() { return CenterSet(2, {-1.0, 0.0, 1.0, 0.0}); }

// Anchors at (-2,0), (2,0) and a near-boundary point at (0.1, 0).
PointConfig anchored(double delta = 0.1) { return PointConfig(2, {-2.0, 0.0, 2.0, 0.0, delta, 0.0}); }

}  // namespace

TEST_CASE("no_switch_certificate is strict at gamma_min / 2") {
  CHECK(no_switch_certificate(0.2, 0.05));
  CHECK_FALSE(no_switch_certificate(0.2, 0.1));
  CHECK(no_switch_certificate(0.2, 0.0));
  CHECK(no_switch_certificate(0.0, 0.0));  // only the identity perturbation
  CHECK_FALSE(no_switch_certificate(0.0, 1e-300));
  CHECK_THROWS_AS(no_switch_certificate(0.2, -1.0), InputError);
  CHECK_THROWS_AS(no_switch_certificate(0.2, NAN), InputError);
}

TEST_CASE("switch_candidates") {
  const auto a = assign_nearest(anchored(), pm_one());
  CHECK(a.margins[0] == doctest::Approx(2.0));
  CHECK(a.margins[1] == doctest::Approx(2.0));
  CHECK(a.margins[2] == doctest::Approx(0.2));
  CHECK(switch_candidates(a, 0.25) == std::vector<std::size_t>{2});
  CHECK(switch_candidates(a, 0.05).empty());

  const PointConfig on_bisector(2, {0.0, 0.0, 0.0, 5.0, 0.0, -3.0});
  const auto b = assign_nearest(on_bisector, pm_one());
  CHECK(switch_candidates(b, 0.0) == std::vector<std::size_t>{0, 1, 2});
}

TEST_CASE("exact_switch_radius examples") {
  const auto c = pm_one();
  const double p1[] = {0.1, 0.0};
  const double p2[] = {-2.0, 0.0};
  const double p3[] = {0.0, 7.0};
  CHECK(exact_switch_radius(p1, c, 1) == doctest::Approx(0.1));
  CHECK(exact_switch_radius(p2, c, 0) == doctest::Approx(2.0));
  CHECK(exact_switch_radius(p3, c, 0) == 0.0);
  CHECK_THROWS_AS(exact_switch_radius(p1, c, 0), InvariantViolation);

  // Cross-check against the squared-distance form (|x-c_j|^2 - |x-c_l|^2) / (2 |c_j - c_l|).
  std::mt19937_64 gen(17);
  for (int trial = 0; trial < 200; ++trial) {
    const auto centers = testing::random_centers(gen, 4, 3);
    const auto x = testing::random_config(gen, 5, 3);
    for (std::size_t i = 0; i < x.size(); ++i) {
      const auto p = x.point(i);
      const std::size_t l = nearest_center(p, centers);
      double oracle = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < centers.size(); ++j) {
        if (j == l) continue;
        const double num = squared_distance(p, centers.center(j)) - squared_distance(p, centers.center(l));
        oracle = std::min(oracle, num / (2.0 * distance(centers.center(j), centers.center(l))));
      }
      CHECK(exact_switch_radius(p, centers, l) == doctest::Approx(oracle).epsilon(1e-9).scale(1.0));
    }
  }
}

TEST_CASE("exact switch radius dominates the margin bound; equality on the center segment") {
  std::mt19937_64 gen(23);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t d = 1 + trial % 5;
    const auto centers = testing::random_centers(gen, 2 + trial % 4, d);
    const auto x = testing::random_config(gen, 15, d);
    const auto a = assign_nearest(x, centers);
    for (std::size_t i = 0; i < x.size(); ++i) {
      CHECK(exact_switch_radius(x.point(i), centers, a.labels[i]) >= a.margins[i] / 2.0 - 1e-12);
    }
  }
  // Points between the two centers: radius == gamma / 2.
  const auto c = pm_one();
  for (double t : {-0.9, -0.5, -0.1, 0.0, 0.3, 0.75}) {
    const double p[] = {t, 0.0};
    const std::size_t l = nearest_center(p, c);
    CHECK(exact_switch_radius(p, c, l) == doctest::Approx(margin(p, c, l) / 2.0));
  }
}

TEST_CASE("radius search on the anchored single-point configuration") {
  const auto x = anchored(0.1);
  const auto w = empirical_partition_radius_search(x, pm_one());
  REQUIRE(w.has_value());
  CHECK(w->moved_index == 2);
  CHECK(w->new_label == 0);
  CHECK(w->radius > 0.1);
  CHECK(w->radius == doctest::Approx(0.1).epsilon(1e-8));
  CHECK(w->after == Partition(3, {{0, 2}, {1}}));
  CHECK(perturbation_size(x, w->perturbed) == w->radius);
  CHECK(w->perturbed.point(2)[0] < 0.0);
}

TEST_CASE("radius search when every point sits on its own center") {
  std::mt19937_64 gen(29);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t k = 2 + trial % 5;
    const auto centers = testing::random_centers(gen, k, 2);
    std::vector<double> coords;
    for (const auto& r : centers.rows()) coords.insert(coords.end(), r.begin(), r.end());
    const PointConfig at_centers(2, coords);

    // Brute force: every (point, competitor) bisector distance; any switch
    // merges two singletons, so every move changes the partition.
    double oracle = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) {
        if (i != j) oracle = std::min(oracle, distance(centers.center(i), centers.center(j)) / 2.0);
      }
    }
    const auto w = empirical_partition_radius_search(at_centers, centers);
    REQUIRE(w.has_value());
    CHECK(w->radius == doctest::Approx(oracle).epsilon(1e-8));
    CHECK(w->radius >= oracle);
    const auto report = analyze_stability(at_centers, centers, false);
    CHECK(report.assignment_radius == doctest::Approx(oracle).epsilon(1e-12));
  }
}

TEST_CASE("radius search skips moves that relabel without regrouping") {
  // Point 1 at (0, 0.4) is 0.1 from the bisector with the empty center (0,1),
  // but crossing it leaves {{1},{2}} intact. The cheapest regrouping move
  // pushes point 1 across x = 2 towards center 2.
  const CenterSet centers(2, {0.0, 0.0, 4.0, 0.0, 0.0, 1.0});
  const PointConfig x(2, {0.0, 0.4, 5.0, 0.0});
  const auto a = assign_nearest(x, centers);
  REQUIRE(a.labels == std::vector<std::size_t>{0, 1});
  CHECK(exact_switch_radius(x.point(0), centers, 0) == doctest::Approx(0.1));

  // Oracle for the relabel-only move: partition is unchanged.
  const double crossed[] = {0.0, 0.5 + 1e-9};
  CHECK(nearest_center(crossed, centers) == 2);
  CHECK(Partition::from_block_ids(std::vector<std::size_t>{2, 1}) ==
        Partition::from_block_ids(a.labels));

  const auto w = empirical_partition_radius_search(x, centers);
  REQUIRE(w.has_value());
  CHECK(w->moved_index == 0);
  CHECK(w->new_label == 1);
  CHECK(w->radius == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(w->after == Partition(2, {{0, 1}}));
}

TEST_CASE("radius search witnesses are valid on random inputs") {
  std::mt19937_64 gen(31);
  for (int trial = 0; trial < 100; ++trial) {
    const auto centers = testing::random_centers(gen, 2 + trial % 3, 2);
    const auto x = testing::random_config(gen, 2 + trial % 6, 2);
    const auto w = empirical_partition_radius_search(x, centers);
    REQUIRE(w.has_value());
    CHECK(perturbation_size(x, w->perturbed) == w->radius);
    CHECK_FALSE(induced_partition(assign_nearest(w->perturbed, centers)) ==
                induced_partition(assign_nearest(x, centers)));
    CHECK(w->radius >= assign_nearest(x, centers).min_margin / 2.0 - 1e-12);
  }
}

TEST_CASE("no-switch theorem and switch necessity on random perturbations") {
  std::mt19937_64 gen(37);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 400; ++trial) {
    const std::size_t d = 1 + trial % 5;
    const std::size_t k = 2 + trial % 4;
    const auto centers = testing::random_centers(gen, k, d);
    const auto x = testing::random_config(gen, 3 + trial % 30, d);
    const auto a = assign_nearest(x, centers);
    const auto base = induced_partition(a);

    // Certified radius.
    const double eps = 0.999 * unit(gen) * a.min_margin / 2.0;
    std::vector<double> coords(x.coords().begin(), x.coords().end());
    for (std::size_t i = 0; i < x.size(); ++i) {
      const auto v = testing::random_displacement(gen, d, eps * unit(gen));
      for (std::size_t t = 0; t < d; ++t) coords[i * d + t] += v[t];
    }
    const PointConfig moved(d, coords);
    REQUIRE(perturbation_size(x, moved) <= eps * (1 + 1e-12) + 1e-15);
    CHECK(no_switch_certificate(a, eps));
    CHECK(assign_nearest(moved, centers).labels == a.labels);
    CHECK(induced_partition(assign_nearest(moved, centers)) == base);

    // Arbitrary radius.
    const double big = 2.0 * unit(gen);
    std::vector<double> coords2(x.coords().begin(), x.coords().end());
    for (std::size_t i = 0; i < x.size(); ++i) {
      const auto v = testing::random_displacement(gen, d, big * unit(gen));
      for (std::size_t t = 0; t < d; ++t) coords2[i * d + t] += v[t];
    }
    const PointConfig moved2(d, coords2);
    const double size = perturbation_size(x, moved2);
    const auto b = assign_nearest(moved2, centers);
    const auto cands = switch_candidates(a, size);
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (b.labels[i] != a.labels[i]) {
        CHECK(a.margins[i] <= 2.0 * size);
        CHECK(std::find(cands.begin(), cands.end(), i) != cands.end());
      }
    }
  }
}

TEST_CASE("analyze_stability fields are consistent") {
  const auto r = analyze_stability(anchored(0.1), pm_one());
  CHECK(r.min_margin == doctest::Approx(0.2));
  CHECK(r.margin_lower_bound_radius == r.min_margin / 2.0);
  CHECK(r.assignment_radius >= r.margin_lower_bound_radius - 1e-15);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(r.per_point_switch_radius[i] >= r.assignment.margins[i] / 2.0 - 1e-15);
  }
  REQUIRE(r.empirical_partition_radius_upper.has_value());
  CHECK(r.empirical_partition_radius_upper->radius >= r.margin_lower_bound_radius);
  CHECK(r.fragile.empty());
}
