#pragma once

// Euclidean K-Means with random or ECIA seeding.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "roughkm/data_model.hpp"
#include "roughkm/error.hpp"

namespace roughkm {

using Point = std::vector<double>;

struct Dataset {
  std::vector<std::string> point_ids;
  std::vector<Point> points;

  Dataset() = default;
  Dataset(std::vector<std::string> ids, std::vector<Point> pts)
      : point_ids(std::move(ids)), points(std::move(pts)) {
    if (points.empty()) throw EmptyResultError("dataset has no points");
    if (point_ids.size() != points.size()) throw ValidationError("point id count does not match point count");
    const auto m = points.front().size();
    if (m == 0) throw DimensionError("points must have at least one coordinate");
    for (const auto& p : points) {
      if (p.size() != m) throw DimensionError("points have differing dimensions");
    }
  }

  // Unlabelled points, ids "p0", "p1", ...
  static Dataset of(std::vector<Point> pts) {
    std::vector<std::string> ids(pts.size());
    for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = "p" + std::to_string(i);
    return {std::move(ids), std::move(pts)};
  }

  // Genes are points, conditions are coordinates.
  static Dataset from_matrix(const ExpressionMatrix& m) {
    std::vector<Point> pts(m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r) pts[r] = m.row(r);
    return {m.gene_ids(), std::move(pts)};
  }

  std::size_t size() const noexcept { return points.size(); }
  std::size_t dim() const noexcept { return points.empty() ? 0 : points.front().size(); }
};

enum class SeedStrategy { random, ecia };

struct Centroids {
  std::vector<Point> vectors;
  SeedStrategy provenance = SeedStrategy::ecia;
  std::optional<std::uint64_t> seed;       // random only
  std::vector<std::size_t> source_points;  // dataset index of each initial centroid

  std::size_t k() const noexcept { return vectors.size(); }
};

enum class KMeansMode { exact, shortcut };

// Audit record for one point in one shortcut-mode pass.
struct ShortcutCheck {
  std::size_t point = 0;
  double stored_nearest = 0.0;
  double own_distance = 0.0;  // distance to the point's current cluster's new centroid
  bool kept = false;
};

struct IterationRecord {
  std::size_t label_changes = 0;
  double wcss = 0.0;  // after the centroid update of this iteration
  std::vector<ShortcutCheck> shortcut;  // empty in exact mode
};

struct ClusterAssignment {
  std::vector<std::size_t> labels;
  std::vector<double> nearest_dist;
  Centroids centroids;
  std::size_t iterations = 0;
  bool converged = false;
  double wcss = 0.0;
  std::vector<IterationRecord> history;

  std::size_t k() const noexcept { return centroids.k(); }
  std::vector<std::size_t> cluster_sizes() const {
    std::vector<std::size_t> sizes(k(), 0);
    for (auto l : labels) ++sizes[l];
    return sizes;
  }
};

inline double squared_distance(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw DimensionError("distance between points of dimension " + std::to_string(x.size()) +
                         " and " + std::to_string(y.size()));
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    sum += d * d;
  }
  return sum;
}

inline double euclidean_distance(std::span<const double> x, std::span<const double> y) {
  return std::sqrt(squared_distance(x, y));
}

namespace detail {

inline void check_k(const Dataset& d, std::size_t k) {
  if (k == 0) throw ConfigError("k must be at least 1");
  if (k > d.size()) {
    throw ConfigError("k = " + std::to_string(k) + " exceeds the number of points (" +
                      std::to_string(d.size()) + ")");
  }
}

}  // namespace detail

/// k distinct data points drawn without replacement.
inline Centroids random_initialize(const Dataset& d, std::size_t k, std::uint64_t seed) {
  detail::check_k(d, k);
  std::vector<std::size_t> order(d.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  // Partial Fisher-Yates; only the first k slots are needed.
  for (std::size_t i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, order.size() - 1);
    std::swap(order[i], order[pick(rng)]);
  }
  Centroids c;
  c.provenance = SeedStrategy::random;
  c.seed = seed;
  for (std::size_t i = 0; i < k; ++i) {
    c.source_points.push_back(order[i]);
    c.vectors.push_back(d.points[order[i]]);
  }
  return c;
}

/// Sizes of k contiguous near-equal parts of n items; the first n mod k parts
/// get one extra item.
inline std::vector<std::size_t> equal_part_sizes(std::size_t n, std::size_t k) {
  std::vector<std::size_t> sizes(k, n / k);
  for (std::size_t j = 0; j < n % k; ++j) ++sizes[j];
  return sizes;
}

/// Deterministic seeding. If any coordinate is negative the whole dataset is
/// shifted by the global minimum; points are stably sorted by distance from
/// the origin, split into k contiguous near-equal parts, and the middle
/// element (offset size/2) of each part becomes a centroid. Centroids are
/// returned in the original, unshifted coordinates.
inline Centroids ecia_initialize(const Dataset& d, std::size_t k) {
  detail::check_k(d, k);

  double global_min = std::numeric_limits<double>::infinity();
  for (const auto& p : d.points)
    for (double x : p) global_min = std::min(global_min, x);
  const double shift = global_min < 0.0 ? -global_min : 0.0;

  std::vector<double> origin_dist(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    double sum = 0.0;
    for (double x : d.points[i]) sum += (x + shift) * (x + shift);
    origin_dist[i] = std::sqrt(sum);
  }

  std::vector<std::size_t> order(d.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return origin_dist[a] < origin_dist[b]; });

  Centroids c;
  c.provenance = SeedStrategy::ecia;
  std::size_t start = 0;
  for (auto size : equal_part_sizes(d.size(), k)) {
    const auto chosen = order[start + size / 2];
    c.source_points.push_back(chosen);
    c.vectors.push_back(d.points[chosen]);
    start += size;
  }
  return c;
}

namespace detail {

// Nearest centroid, lowest index on ties.
inline std::pair<std::size_t, double> nearest_centroid(const Point& p, const std::vector<Point>& centroids) {
  std::size_t best = 0;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < centroids.size(); ++j) {
    const double d2 = squared_distance(p, centroids[j]);
    if (d2 < best_d2) {
      best_d2 = d2;
      best = j;
    }
  }
  return {best, std::sqrt(best_d2)};
}

// Means of members; an empty cluster keeps its previous centroid.
inline void update_centroids(const Dataset& d, const std::vector<std::size_t>& labels,
                             std::vector<Point>& centroids) {
  const auto k = centroids.size();
  std::vector<Point> sums(k, Point(d.dim(), 0.0));
  std::vector<std::size_t> counts(k, 0);
  for (std::size_t i = 0; i < d.size(); ++i) {
    auto& s = sums[labels[i]];
    for (std::size_t c = 0; c < d.dim(); ++c) s[c] += d.points[i][c];
    ++counts[labels[i]];
  }
  for (std::size_t j = 0; j < k; ++j) {
    if (counts[j] == 0) continue;
    for (std::size_t c = 0; c < d.dim(); ++c) centroids[j][c] = sums[j][c] / static_cast<double>(counts[j]);
  }
}

inline double wcss(const Dataset& d, const std::vector<std::size_t>& labels, const std::vector<Point>& centroids) {
  double total = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) total += squared_distance(d.points[i], centroids[labels[i]]);
  return total;
}

}  // namespace detail

inline constexpr std::size_t default_max_iters = 100;

/// Lloyd iteration from the given centroids. An iteration is one assignment
/// pass followed by a centroid update; the run converges when an assignment
/// pass changes no label, and `iterations` counts completed updates.
///
/// In shortcut mode a point whose distance to its own cluster's new centroid
/// is <= its stored nearest distance keeps its label without a full scan.
/// This can leave a point in a cluster that is no longer its nearest.
inline ClusterAssignment kmeans(const Dataset& d, const Centroids& init,
                                KMeansMode mode = KMeansMode::exact,
                                std::size_t max_iters = default_max_iters) {
  if (max_iters == 0) throw ConfigError("max_iters must be at least 1");
  detail::check_k(d, init.k());
  for (const auto& c : init.vectors) {
    if (c.size() != d.dim()) throw DimensionError("centroid dimension does not match the dataset");
  }

  ClusterAssignment out;
  out.centroids = init;
  auto& centroids = out.centroids.vectors;
  const auto n = d.size();
  out.labels.assign(n, 0);
  out.nearest_dist.assign(n, 0.0);

  // Initial full assignment.
  for (std::size_t i = 0; i < n; ++i) {
    auto [j, dist] = detail::nearest_centroid(d.points[i], centroids);
    out.labels[i] = j;
    out.nearest_dist[i] = dist;
  }

  for (;;) {
    detail::update_centroids(d, out.labels, centroids);
    ++out.iterations;
    IterationRecord rec;
    rec.wcss = detail::wcss(d, out.labels, centroids);

    std::size_t changes = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (mode == KMeansMode::shortcut) {
        const double own = euclidean_distance(d.points[i], centroids[out.labels[i]]);
        ShortcutCheck check{i, out.nearest_dist[i], own, own <= out.nearest_dist[i]};
        rec.shortcut.push_back(check);
        if (check.kept) {
          out.nearest_dist[i] = own;
          continue;
        }
      }
      auto [j, dist] = detail::nearest_centroid(d.points[i], centroids);
      if (j != out.labels[i]) ++changes;
      out.labels[i] = j;
      out.nearest_dist[i] = dist;
    }
    rec.label_changes = changes;
    out.history.push_back(std::move(rec));

    if (changes == 0) {
      out.converged = true;
      break;
    }
    if (out.iterations >= max_iters) {
      // Labels moved after the last update; bring centroids in line with them.
      detail::update_centroids(d, out.labels, centroids);
      break;
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    out.nearest_dist[i] = euclidean_distance(d.points[i], centroids[out.labels[i]]);
  }
  out.wcss = detail::wcss(d, out.labels, centroids);
  return out;
}

struct ClusterOptions {
  std::size_t k = 7;
  SeedStrategy strategy = SeedStrategy::ecia;
  std::uint64_t seed = 0;  // random strategy only
  KMeansMode mode = KMeansMode::exact;
  std::size_t max_iters = default_max_iters;
};

inline ClusterAssignment cluster_pipeline(const ExpressionMatrix& m, const ClusterOptions& opt) {
  if (!m.is_complete()) throw ValidationError("clustering requires a complete matrix");
  const auto d = Dataset::from_matrix(m);
  const auto init = opt.strategy == SeedStrategy::ecia ? ecia_initialize(d, opt.k)
                                                        : random_initialize(d, opt.k, opt.seed);
  return kmeans(d, init, opt.mode, opt.max_iters);
}

inline const char* to_string(SeedStrategy s) { return s == SeedStrategy::ecia ? "ecia" : "random"; }
inline const char* to_string(KMeansMode m) { return m == KMeansMode::exact ? "exact" : "shortcut"; }

}  // namespace roughkm
