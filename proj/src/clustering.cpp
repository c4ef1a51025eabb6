// Apache License, Version 2.0, refer to LICENSE.txt

#include "essayplan/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "essayplan/error.hpp"

namespace essayplan {

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

std::vector<std::vector<std::size_t>> KMeansResult::clusters() const {
  std::vector<std::vector<std::size_t>> out(centroids.size());
  for (std::size_t i = 0; i < assignment.size(); ++i) out[assignment[i]].push_back(i);
  return out;
}

namespace {

std::vector<Vector> seed_plus_plus(std::span<const Vector> points, std::size_t k,
                                   std::mt19937_64& rng) {
  const std::size_t n = points.size();
  std::vector<Vector> centroids;
  std::vector<bool> chosen(n, false);
  std::uniform_int_distribution<std::size_t> first(0, n - 1);
  std::size_t pick = first(rng);
  centroids.push_back(points[pick]);
  chosen[pick] = true;

  std::vector<double> nearest(n);
  for (std::size_t i = 0; i < n; ++i) nearest[i] = squared_distance(points[i], centroids[0]);

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  while (centroids.size() < k) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) total += chosen[i] ? 0.0 : nearest[i];
    if (total > 0.0) {
      const double u = unit(rng) * total;
      double acc = 0.0;
      pick = n;
      for (std::size_t i = 0; i < n; ++i) {
        if (chosen[i]) continue;
        acc += nearest[i];
        if (nearest[i] > 0.0 && acc > u) {
          pick = i;
          break;
        }
      }
      if (pick == n) {  // rounding at the upper end
        for (std::size_t i = n; i-- > 0;) {
          if (!chosen[i] && nearest[i] > 0.0) {
            pick = i;
            break;
          }
        }
      }
    } else {
      // Every remaining point coincides with a centroid.
      std::vector<std::size_t> rest;
      for (std::size_t i = 0; i < n; ++i) {
        if (!chosen[i]) rest.push_back(i);
      }
      pick = rest[std::uniform_int_distribution<std::size_t>(0, rest.size() - 1)(rng)];
    }
    chosen[pick] = true;
    centroids.push_back(points[pick]);
    for (std::size_t i = 0; i < n; ++i) {
      nearest[i] = std::min(nearest[i], squared_distance(points[i], centroids.back()));
    }
  }
  return centroids;
}

// Returns the inertia of the new assignment. A point stays in its current
// cluster when that cluster ties for nearest; otherwise ties go to the
// lowest index.
double assign(std::span<const Vector> points, const std::vector<Vector>& centroids,
              std::vector<std::size_t>& assignment) {
  double inertia = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_c = 0;
    for (std::size_t c = 0; c < centroids.size(); ++c) {
      const double d = squared_distance(points[i], centroids[c]);
      if (d < best) {
        best = d;
        best_c = c;
      }
    }
    if (squared_distance(points[i], centroids[assignment[i]]) == best) best_c = assignment[i];
    assignment[i] = best_c;
    inertia += best;
  }
  return inertia;
}

void update_centroids(std::span<const Vector> points, std::vector<Vector>& centroids,
                      std::vector<std::size_t>& assignment) {
  const std::size_t k = centroids.size();
  const std::size_t dim = points[0].size();
  std::vector<std::size_t> sizes(k, 0);
  for (std::size_t c : assignment) ++sizes[c];

  for (std::size_t empty = 0; empty < k; ++empty) {
    if (sizes[empty] != 0) continue;
    std::size_t far = points.size();
    double far_d = -1.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (sizes[assignment[i]] < 2) continue;
      const double d = squared_distance(points[i], centroids[assignment[i]]);
      if (d > far_d) {
        far_d = d;
        far = i;
      }
    }
    --sizes[assignment[far]];
    assignment[far] = empty;
    sizes[empty] = 1;
  }

  for (auto& c : centroids) std::fill(c.begin(), c.end(), 0.0);
  for (std::size_t i = 0; i < points.size(); ++i) {
    Vector& c = centroids[assignment[i]];
    for (std::size_t d = 0; d < dim; ++d) c[d] += points[i][d];
  }
  for (std::size_t c = 0; c < k; ++c) {
    for (double& x : centroids[c]) x /= static_cast<double>(sizes[c]);
  }
}

}  // namespace

KMeansResult kmeans(std::span<const Vector> points, std::size_t k, std::size_t max_iterations,
                    std::uint64_t seed) {
  if (k == 0) throw ValidationError("k-means needs k >= 1");
  if (k > points.size()) {
    throw ValidationError("k-means with k = " + std::to_string(k) + " exceeds the " +
                          std::to_string(points.size()) + " points");
  }
  const std::size_t dim = points[0].size();
  for (const Vector& p : points) {
    if (p.size() != dim) throw ValidationError("k-means points differ in dimension");
  }

  std::mt19937_64 rng(seed);
  KMeansResult result;
  result.centroids = seed_plus_plus(points, k, rng);
  result.assignment.assign(points.size(), 0);
  result.inertia_history.push_back(assign(points, result.centroids, result.assignment));

  std::vector<std::size_t> previous;
  while (result.iterations < max_iterations) {
    previous = result.assignment;
    update_centroids(points, result.centroids, result.assignment);
    result.inertia_history.push_back(assign(points, result.centroids, result.assignment));
    ++result.iterations;
    if (result.assignment == previous) {
      result.converged = true;
      break;
    }
  }
  return result;
}

AffinityPropagationResult affinity_propagation(const Matrix& similarity, double damping,
                                               std::size_t max_iterations,
                                               std::optional<double> preference,
                                               std::size_t stable_iterations) {
  if (similarity.rows() != similarity.cols()) {
    throw ValidationError("affinity propagation needs a square similarity matrix");
  }
  if (!(damping > 0.0 && damping < 1.0)) {
    throw ValidationError("affinity propagation damping must lie in (0, 1)");
  }
  const std::size_t n = similarity.rows();
  AffinityPropagationResult result;
  if (n == 0) return result;
  if (n == 1) {
    result.exemplar_of = {0};
    result.exemplars = {0};
    result.converged = true;
    return result;
  }

  Matrix s = similarity;
  if (!preference) {
    std::vector<double> off;
    off.reserve(n * (n - 1));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i != j) off.push_back(s(i, j));
      }
    }
    std::sort(off.begin(), off.end());
    const std::size_t m = off.size();
    preference = m % 2 ? off[m / 2] : 0.5 * (off[m / 2 - 1] + off[m / 2]);
  }
  for (std::size_t i = 0; i < n; ++i) s(i, i) = *preference;
  // Break exact ties between symmetric points with relative noise of
  // sqrt(epsilon); fixed seed keeps runs identical.
  const double relative = std::sqrt(std::numeric_limits<double>::epsilon());
  std::mt19937_64 jitter_rng(0);
  std::normal_distribution<double> jitter;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      const double scale = relative * std::abs(s(i, k)) + std::numeric_limits<double>::min() * 100.0;
      s(i, k) += scale * jitter(jitter_rng);
    }
  }

  Matrix r(n, n), a(n, n);
  std::vector<std::size_t> exemplars, last_exemplars;
  std::size_t unchanged = 0;

  for (std::size_t it = 0; it < max_iterations; ++it) {
    // Responsibilities: r(i,k) = s(i,k) - max_{k' != k} (a(i,k') + s(i,k')).
    for (std::size_t i = 0; i < n; ++i) {
      double first = -std::numeric_limits<double>::infinity();
      double second = first;
      std::size_t first_k = 0;
      for (std::size_t k = 0; k < n; ++k) {
        const double v = a(i, k) + s(i, k);
        if (v > first) {
          second = first;
          first = v;
          first_k = k;
        } else if (v > second) {
          second = v;
        }
      }
      for (std::size_t k = 0; k < n; ++k) {
        const double fresh = s(i, k) - (k == first_k ? second : first);
        r(i, k) = damping * r(i, k) + (1.0 - damping) * fresh;
      }
    }
    // Availabilities.
    for (std::size_t k = 0; k < n; ++k) {
      double positive = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (i != k) positive += std::max(0.0, r(i, k));
      }
      for (std::size_t i = 0; i < n; ++i) {
        double fresh;
        if (i == k) {
          fresh = positive;
        } else {
          fresh = std::min(0.0, r(k, k) + positive - std::max(0.0, r(i, k)));
        }
        a(i, k) = damping * a(i, k) + (1.0 - damping) * fresh;
      }
    }

    exemplars.clear();
    for (std::size_t k = 0; k < n; ++k) {
      if (r(k, k) + a(k, k) > 0.0) exemplars.push_back(k);
    }
    result.iterations = it + 1;
    if (!exemplars.empty() && exemplars == last_exemplars) {
      if (++unchanged >= stable_iterations) {
        result.converged = true;
        break;
      }
    } else {
      unchanged = 1;
    }
    last_exemplars = exemplars;
  }

  if (exemplars.empty()) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < n; ++k) {
      if (r(k, k) + a(k, k) > r(best, best) + a(best, best)) best = k;
    }
    exemplars = {best};
  }

  // Assign, re-centre each cluster on the member with the largest summed
  // similarity to the others (preference on the diagonal), reassign.
  auto similarity_with_preference = [&](std::size_t i, std::size_t k) {
    return i == k ? *preference : similarity(i, k);
  };
  auto nearest_exemplars = [&](const std::vector<std::size_t>& centres) {
    std::vector<std::size_t> of(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t best = centres[0];
      for (std::size_t e : centres) {
        if (e == i) {
          best = i;
          break;
        }
        if (similarity(i, e) > similarity(i, best)) best = e;
      }
      of[i] = best;
    }
    return of;
  };
  const std::vector<std::size_t> initial = nearest_exemplars(exemplars);
  std::vector<std::size_t> refined;
  for (std::size_t e : exemplars) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < n; ++i) {
      if (initial[i] == e) members.push_back(i);
    }
    std::size_t best = members[0];
    double best_sum = -std::numeric_limits<double>::infinity();
    for (std::size_t candidate : members) {
      double sum = 0.0;
      for (std::size_t i : members) sum += similarity_with_preference(i, candidate);
      if (sum > best_sum) {
        best_sum = sum;
        best = candidate;
      }
    }
    refined.push_back(best);
  }
  std::sort(refined.begin(), refined.end());
  result.exemplars = refined;
  result.exemplar_of = nearest_exemplars(refined);
  return result;
}

}  // namespace essayplan
