// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "essayplan/matrix.hpp"

namespace essayplan {

struct KMeansResult {
  std::vector<std::size_t> assignment;  // point -> cluster
  std::vector<Vector> centroids;
  /// Inertia after the initial assignment and after every Lloyd iteration.
  std::vector<double> inertia_history;
  std::size_t iterations = 0;
  bool converged = false;

  double inertia() const { return inertia_history.empty() ? 0.0 : inertia_history.back(); }
  /// Member indices per cluster, ascending.
  std::vector<std::vector<std::size_t>> clusters() const;
};

/// Lloyd's algorithm with k-means++ seeding. Stops when the assignment is
/// stable or after max_iterations. An empty cluster takes over the point
/// farthest from its current centroid.
KMeansResult kmeans(std::span<const Vector> points, std::size_t k, std::size_t max_iterations,
                    std::uint64_t seed);

struct AffinityPropagationResult {
  std::vector<std::size_t> exemplar_of;  // point -> exemplar index
  std::vector<std::size_t> exemplars;    // ascending
  std::size_t iterations = 0;
  bool converged = false;
};

/// Responsibility/availability message passing (Frey & Dueck) with
/// damping. The diagonal of `similarity` is replaced by `preference`, or
/// by the median of the off-diagonal similarities when it is empty.
/// Converges once the exemplar set has been unchanged for
/// `stable_iterations` consecutive iterations. Each final cluster is
/// re-centred on the member with the largest summed similarity to its
/// cluster, and points join their most similar exemplar.
AffinityPropagationResult affinity_propagation(const Matrix& similarity, double damping,
                                               std::size_t max_iterations,
                                               std::optional<double> preference = std::nullopt,
                                               std::size_t stable_iterations = 10);

double squared_distance(std::span<const double> a, std::span<const double> b);

}  // namespace essayplan
