// Apache License, Version 2.0, refer to LICENSE.txt

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"
#include "essayplan/clustering.hpp"
#include "essayplan/error.hpp"

using namespace essayplan;

namespace {

// Straightforward O(n^3) transcription of the message updates, used as
// an independent reference for the production implementation.
std::vector<std::size_t> reference_affinity_propagation(Matrix s, double damping, std::size_t iterations,
                                                        double preference) {
  const std::size_t n = s.rows();
  for (std::size_t i = 0; i < n; ++i) s(i, i) = preference;
  Matrix r(n, n), a(n, n);
  for (std::size_t it = 0; it < iterations; ++it) {
    Matrix r_new(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < n; ++k) {
        double m = -std::numeric_limits<double>::infinity();
        for (std::size_t kk = 0; kk < n; ++kk) {
          if (kk != k) m = std::max(m, a(i, kk) + s(i, kk));
        }
        r_new(i, k) = s(i, k) - m;
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < n; ++k) r(i, k) = damping * r(i, k) + (1 - damping) * r_new(i, k);
    }
    Matrix a_new(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < n; ++k) {
        double sum = 0.0;
        for (std::size_t ii = 0; ii < n; ++ii) {
          if (ii != i && ii != k) sum += std::max(0.0, r(ii, k));
        }
        a_new(i, k) = i == k ? sum : std::min(0.0, r(k, k) + sum);
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < n; ++k) a(i, k) = damping * a(i, k) + (1 - damping) * a_new(i, k);
    }
  }
  std::vector<std::size_t> raw;
  for (std::size_t k = 0; k < n; ++k) {
    if (r(k, k) + a(k, k) > 0) raw.push_back(k);
  }
  if (raw.empty()) return raw;
  // Refinement: each cluster's exemplar becomes its most central member.
  auto closest = [&](std::size_t i, const std::vector<std::size_t>& centres) {
    if (std::find(centres.begin(), centres.end(), i) != centres.end()) return i;
    std::size_t best = centres[0];
    for (std::size_t e : centres) {
      if (s(i, e) > s(i, best)) best = e;
    }
    return best;
  };
  std::vector<std::size_t> exemplars;
  for (std::size_t e : raw) {
    std::size_t best = n;
    double best_sum = 0.0;
    for (std::size_t c = 0; c < n; ++c) {
      if (closest(c, raw) != e) continue;
      double sum = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (closest(i, raw) == e) sum += s(i, c);
      }
      if (best == n || sum > best_sum) {
        best = c;
        best_sum = sum;
      }
    }
    exemplars.push_back(best);
  }
  std::sort(exemplars.begin(), exemplars.end());
  return exemplars;
}

Matrix two_groups(double intra, double inter) {
  Matrix s(10, 10);
  for (std::size_t i = 0; i < 10; ++i) {
    for (std::size_t j = 0; j < 10; ++j) s(i, j) = (i < 5) == (j < 5) ? intra : inter;
  }
  return s;
}

}  // namespace

TEST_CASE("k-means recovers well separated groups") {
  std::vector<Vector> points{{0, 0}, {0, 1}, {10, 10}, {10, 11}};
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto result = kmeans(points, 2, 100, seed);
    auto clusters = result.clusters();
    std::sort(clusters.begin(), clusters.end());
    CHECK(clusters == std::vector<std::vector<std::size_t>>{{0, 1}, {2, 3}});
    std::vector<Vector> centroids = result.centroids;
    std::sort(centroids.begin(), centroids.end());
    CHECK(centroids == std::vector<Vector>{{0, 0.5}, {10, 10.5}});
    CHECK(result.converged);
  }
}

TEST_CASE("k-means edge sizes") {
  std::vector<Vector> points{{1, 2}, {3, 4}, {5, 9}};
  auto one = kmeans(points, 1, 50, 1);
  CHECK(one.centroids[0] == Vector{3, 5});
  auto all = kmeans(points, 3, 50, 1);
  CHECK(all.inertia() == 0.0);
  for (const auto& c : all.clusters()) CHECK(c.size() == 1);
  CHECK_THROWS_AS(kmeans(points, 4, 50, 1), ValidationError);
  CHECK_THROWS_AS(kmeans(points, 0, 50, 1), ValidationError);
}

TEST_CASE("k-means inertia never increases and clusters partition the input") {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> g;
  std::uniform_int_distribution<std::size_t> count(5, 40), kdist(1, 6);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Vector> points(count(rng), Vector(3));
    for (auto& p : points) {
      for (double& x : p) x = g(rng);
    }
    const std::size_t k = std::min(kdist(rng), points.size());
    auto result = kmeans(points, k, 100, static_cast<std::uint64_t>(trial));
    for (std::size_t i = 1; i < result.inertia_history.size(); ++i) {
      CHECK(result.inertia_history[i] <= result.inertia_history[i - 1] + 1e-12);
    }
    std::vector<std::size_t> seen;
    for (const auto& c : result.clusters()) seen.insert(seen.end(), c.begin(), c.end());
    std::sort(seen.begin(), seen.end());
    CHECK(seen.size() == points.size());
    CHECK(std::adjacent_find(seen.begin(), seen.end()) == seen.end());
  }
}

TEST_CASE("k-means handles duplicate points") {
  std::vector<Vector> points{{1, 1}, {1, 1}, {1, 1}, {2, 2}};
  auto result = kmeans(points, 3, 20, 4);
  for (const auto& c : result.clusters()) CHECK_FALSE(c.empty());
}

TEST_CASE("affinity propagation single point") {
  auto result = affinity_propagation(Matrix(1, 1, 0.0), 0.5, 10);
  CHECK(result.exemplar_of == std::vector<std::size_t>{0});
}

TEST_CASE("affinity propagation finds two tight groups") {
  const Matrix s = two_groups(0.99, 0.01);
  auto result = affinity_propagation(s, 0.9, 200);
  REQUIRE(result.exemplars.size() == 2);
  CHECK(result.exemplars[0] < 5);
  CHECK(result.exemplars[1] >= 5);
  CHECK(result.converged);
  for (std::size_t i = 0; i < 10; ++i) CHECK((result.exemplar_of[i] < 5) == (i < 5));
}

TEST_CASE("two slightly uneven groups agree with the reference") {
  Matrix s = two_groups(0.99, 0.01);
  for (std::size_t i = 0; i < 10; ++i) {
    for (std::size_t j = 0; j < 10; ++j) s(i, j) += 1e-3 * static_cast<double>((3 * i + 7 * j) % 11) / 11.0;
  }
  auto result = affinity_propagation(s, 0.9, 200, 0.01, 1000);
  auto expected = reference_affinity_propagation(s, 0.9, 200, 0.01);
  CHECK(expected.size() == 2);
  CHECK(result.exemplars == expected);
}

TEST_CASE("affinity propagation agrees with the reference on random data") {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 12;
    std::vector<Vector> pts(n, Vector(2));
    for (auto& p : pts) {
      for (double& x : p) x = g(rng) + (&p - pts.data() < 6 ? 0.0 : 6.0);
    }
    Matrix s(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) s(i, j) = -squared_distance(pts[i], pts[j]);
    }
    const double pref = -20.0;
    auto result = affinity_propagation(s, 0.7, 60, pref, 1000);
    CHECK(result.exemplars == reference_affinity_propagation(s, 0.7, 60, pref));
    for (std::size_t e : result.exemplars) CHECK(result.exemplar_of[e] == e);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t e : result.exemplars) CHECK(s(i, result.exemplar_of[i]) >= s(i, e));
    }
  }
}

TEST_CASE("affinity propagation input errors") {
  CHECK_THROWS_AS(affinity_propagation(Matrix(2, 3), 0.5, 10), ValidationError);
  CHECK_THROWS_AS(affinity_propagation(Matrix(2, 2), 1.2, 10), ValidationError);
  CHECK_THROWS_AS(affinity_propagation(Matrix(2, 2), 0.0, 10), ValidationError);
}
