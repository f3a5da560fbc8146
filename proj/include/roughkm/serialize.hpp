#pragma once

// JSON and TSV renderings of reducts, assignments and silhouette reports.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "roughkm/clustering.hpp"
#include "roughkm/data_model.hpp"
#include "roughkm/error.hpp"
#include "roughkm/evaluation.hpp"
#include "roughkm/roughset.hpp"

namespace roughkm {

using json = nlohmann::ordered_json;

inline json to_json(const Ratio& r) {
  const auto red = r.reduced();
  return {{"ratio", red.str()}, {"numerator", red.num}, {"denominator", red.den}, {"value", r.value()}};
}

inline json to_json(const Reduct& r, const std::vector<std::string>& attribute_ids) {
  json rounds = json::array();
  for (std::size_t i = 0; i < r.trace.size(); ++i) {
    const auto& round = r.trace[i];
    json candidates = json::array();
    for (const auto& [attr, score] : round.candidates) {
      candidates.push_back({{"gene", attribute_ids[attr]}, {"mean_dependency", to_json(score)}});
    }
    rounds.push_back({{"round", i + 1},
                      {"accepted", attribute_ids[round.accepted]},
                      {"mean_dependency", to_json(round.mean_dependency)},
                      {"strict_improvement", round.strict_improvement},
                      {"candidates", std::move(candidates)}});
  }
  return {{"selected", r.selected_ids},
          {"initial_mean_dependency", to_json(r.initial_mean_dependency)},
          {"final_mean_dependency", to_json(r.final_mean_dependency)},
          {"full_mean_dependency", to_json(r.full_mean_dependency)},
          {"rounds", std::move(rounds)}};
}

inline json to_json(const ClusterAssignment& a, const Dataset& d) {
  const auto sizes = a.cluster_sizes();
  json clusters = json::array();
  for (std::size_t j = 0; j < a.k(); ++j) {
    clusters.push_back({{"cluster", cluster_name(j)},
                        {"index", j},
                        {"size", sizes[j]},
                        {"centroid", a.centroids.vectors[j]}});
  }
  json points = json::array();
  for (std::size_t i = 0; i < d.size(); ++i) {
    points.push_back({{"gene", d.point_ids[i]},
                      {"cluster", cluster_name(a.labels[i])},
                      {"nearest_dist", a.nearest_dist[i]}});
  }
  json initial = json::array();
  for (auto p : a.centroids.source_points) initial.push_back(d.point_ids[p]);
  return {{"strategy", to_string(a.centroids.provenance)},
          {"seed", a.centroids.seed ? json(*a.centroids.seed) : json(nullptr)},
          {"k", a.k()},
          {"initial_centroid_genes", std::move(initial)},
          {"iterations", a.iterations},
          {"converged", a.converged},
          {"wcss", a.wcss},
          {"clusters", std::move(clusters)},
          {"assignments", std::move(points)}};
}

inline json to_json(const SilhouetteReport& r) {
  json clusters = json::array();
  for (const auto& c : r.per_cluster) {
    clusters.push_back({{"cluster", cluster_name(c.cluster)}, {"size", c.size}, {"mean_s", c.mean_s}});
  }
  json points = json::array();
  for (const auto& p : r.per_point) {
    points.push_back({{"gene", p.point_id}, {"cluster", cluster_name(p.cluster)}, {"s", p.s}});
  }
  return {{"global_mean_s", r.global_mean_s},
          {"compact_cluster", cluster_name(r.compact_cluster)},
          {"clusters", std::move(clusters)},
          {"points", std::move(points)}};
}

// ---------------------------------------------------------------------------
// TSV

// gene, cluster, nearest_dist
inline std::string assignment_tsv(const ClusterAssignment& a, const Dataset& d) {
  std::string out = "gene\tcluster\tnearest_dist\n";
  for (std::size_t i = 0; i < d.size(); ++i) {
    out += d.point_ids[i] + '\t' + cluster_name(a.labels[i]) + '\t' +
           detail::format_real(a.nearest_dist[i]) + '\n';
  }
  return out;
}

// cluster, size, then one column per coordinate
inline std::string centroids_tsv(const ClusterAssignment& a, const std::vector<std::string>& coordinate_ids) {
  std::string out = "cluster\tsize";
  for (const auto& c : coordinate_ids) out += '\t' + c;
  out += '\n';
  const auto sizes = a.cluster_sizes();
  for (std::size_t j = 0; j < a.k(); ++j) {
    out += cluster_name(j) + '\t' + std::to_string(sizes[j]);
    for (double x : a.centroids.vectors[j]) out += '\t' + detail::format_real(x);
    out += '\n';
  }
  return out;
}

// cluster, size, mean_s: plot-ready bar chart data.
inline std::string silhouette_clusters_tsv(const SilhouetteReport& r) {
  std::string out = "cluster\tsize\tmean_s\n";
  for (const auto& c : r.per_cluster) {
    out += cluster_name(c.cluster) + '\t' + std::to_string(c.size) + '\t' + detail::format_real(c.mean_s) + '\n';
  }
  return out;
}

inline std::string silhouette_points_tsv(const SilhouetteReport& r) {
  std::string out = "gene\tcluster\ts\n";
  for (const auto& p : r.per_point) {
    out += p.point_id + '\t' + cluster_name(p.cluster) + '\t' + detail::format_real(p.s) + '\n';
  }
  return out;
}

namespace detail {

inline std::size_t parse_cluster_name(std::string_view name, std::size_t line) {
  std::size_t index = 0;
  if (name.size() < 2 || name.front() != 'C') throw ParseError("bad cluster name '" + std::string(name) + "'", line);
  auto [ptr, ec] = std::from_chars(name.data() + 1, name.data() + name.size(), index);
  if (ec != std::errc{} || ptr != name.data() + name.size() || index == 0) {
    throw ParseError("bad cluster name '" + std::string(name) + "'", line);
  }
  return index - 1;
}

}  // namespace detail

struct LabelledGene {
  std::string gene;
  std::size_t cluster = 0;
};

/// Reads the gene and cluster columns of an assignment TSV.
inline std::vector<LabelledGene> parse_assignment_tsv(std::string_view text) {
  auto lines = detail::split_lines(text);
  if (lines.empty()) throw ParseError("assignment has no header row", 1);
  auto header = detail::split_fields(lines[0], '\t');
  if (header.size() < 2 || header[0] != "gene" || header[1] != "cluster") {
    throw ParseError("assignment header must start with 'gene<TAB>cluster'", 1);
  }
  std::vector<LabelledGene> out;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    if (lines[li].empty()) continue;
    auto fields = detail::split_fields(lines[li], '\t');
    if (fields.size() != header.size()) throw ParseError("ragged assignment row", li + 1);
    out.push_back({std::string(fields[0]), detail::parse_cluster_name(fields[1], li + 1)});
  }
  return out;
}

/// Reads a cluster/size/mean_s table back.
inline std::vector<ClusterSilhouette> parse_silhouette_clusters_tsv(std::string_view text) {
  auto lines = detail::split_lines(text);
  if (lines.empty() || lines[0] != "cluster\tsize\tmean_s") {
    throw ParseError("expected header 'cluster<TAB>size<TAB>mean_s'", 1);
  }
  std::vector<ClusterSilhouette> out;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    auto fields = detail::split_fields(lines[li], '\t');
    if (fields.size() != 3) throw ParseError("ragged row", li + 1);
    ClusterSilhouette c;
    c.cluster = detail::parse_cluster_name(fields[0], li + 1);
    auto [p1, e1] = std::from_chars(fields[1].data(), fields[1].data() + fields[1].size(), c.size);
    auto mean = detail::parse_real(fields[2]);
    if (e1 != std::errc{} || !mean) throw ParseError("non-numeric field", li + 1);
    c.mean_s = *mean;
    out.push_back(c);
  }
  return out;
}

}  // namespace roughkm
