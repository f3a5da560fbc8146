#pragma once

// Silhouette coefficients and compact-cluster designation.

#include <algorithm>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "roughkm/clustering.hpp"
#include "roughkm/error.hpp"

namespace roughkm {

struct PointSilhouette {
  std::string point_id;
  std::size_t cluster = 0;
  double s = 0.0;
};

struct ClusterSilhouette {
  std::size_t cluster = 0;
  std::size_t size = 0;
  double mean_s = 0.0;
};

struct SilhouetteReport {
  std::vector<PointSilhouette> per_point;
  std::vector<ClusterSilhouette> per_cluster;  // non-empty clusters, ascending index
  double global_mean_s = 0.0;
  std::size_t compact_cluster = 0;
};

// 1-based display name used in reports: cluster 0 is "C1".
inline std::string cluster_name(std::size_t cluster) { return "C" + std::to_string(cluster + 1); }

/// Position of the largest value; the first one wins ties.
inline std::size_t argmax_first(std::span<const double> values) {
  if (values.empty()) throw EmptyResultError("argmax of an empty sequence");
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

/// Cluster with the highest mean silhouette, lowest index on ties.
inline std::size_t compact_cluster(const SilhouetteReport& r) {
  if (r.per_cluster.empty()) throw EmptyResultError("silhouette report has no clusters");
  std::vector<double> means;
  means.reserve(r.per_cluster.size());
  for (const auto& c : r.per_cluster) means.push_back(c.mean_s);
  return r.per_cluster[argmax_first(means)].cluster;
}

/// Rousseeuw silhouette: a(i) is the mean distance to the rest of i's
/// cluster, b(i) the smallest mean distance to another non-empty cluster,
/// s(i) = (b - a) / max(a, b). Members of singleton clusters score 0.
inline SilhouetteReport silhouette_scores(const Dataset& d, std::span<const std::size_t> labels) {
  const auto n = d.size();
  if (labels.size() != n) throw ValidationError("assignment does not label every point");
  std::size_t k = 0;
  for (auto l : labels) k = std::max(k, l + 1);

  std::vector<std::size_t> sizes(k, 0);
  for (auto l : labels) ++sizes[l];
  const auto non_empty = static_cast<std::size_t>(std::count_if(sizes.begin(), sizes.end(), [](auto s) { return s > 0; }));
  if (non_empty < 2) throw EmptyResultError("silhouette needs at least two non-empty clusters");

  SilhouetteReport r;
  r.per_point.reserve(n);
  std::vector<double> sum_to(k);
  for (std::size_t i = 0; i < n; ++i) {
    std::fill(sum_to.begin(), sum_to.end(), 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) sum_to[labels[j]] += euclidean_distance(d.points[i], d.points[j]);
    }
    const auto own = labels[i];
    double s = 0.0;
    if (sizes[own] > 1) {
      const double a = sum_to[own] / static_cast<double>(sizes[own] - 1);
      double b = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < k; ++c) {
        if (c != own && sizes[c] > 0) b = std::min(b, sum_to[c] / static_cast<double>(sizes[c]));
      }
      const double denom = std::max(a, b);
      s = denom > 0.0 ? (b - a) / denom : 0.0;
    }
    r.per_point.push_back({d.point_ids[i], own, s});
  }

  std::vector<double> cluster_sum(k, 0.0);
  double total = 0.0;
  for (const auto& p : r.per_point) {
    cluster_sum[p.cluster] += p.s;
    total += p.s;
  }
  for (std::size_t c = 0; c < k; ++c) {
    if (sizes[c] > 0) r.per_cluster.push_back({c, sizes[c], cluster_sum[c] / static_cast<double>(sizes[c])});
  }
  r.global_mean_s = total / static_cast<double>(n);
  r.compact_cluster = compact_cluster(r);
  return r;
}

inline SilhouetteReport silhouette_scores(const Dataset& d, const ClusterAssignment& a) {
  return silhouette_scores(d, a.labels);
}

}  // namespace roughkm
