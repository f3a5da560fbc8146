#pragma once

// Planted-cluster expression matrices for tests and demos.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "roughkm/clustering.hpp"
#include "roughkm/data_model.hpp"
#include "roughkm/error.hpp"

namespace roughkm {

struct SyntheticSpec {
  std::size_t genes = 300;
  std::size_t conditions = 17;
  std::size_t planted_clusters = 7;
  double noise = 0.5;             // standard deviation of additive Gaussian noise
  double missing_fraction = 0.0;  // share of entries blanked out, in [0, 1)
  std::uint64_t seed = 1;
};

struct SyntheticData {
  ExpressionMatrix matrix;
  std::vector<std::size_t> labels;  // planted cluster of each gene row
};

namespace detail {

inline std::string padded_id(const char* prefix, std::size_t i, std::size_t count) {
  const int width = static_cast<int>(std::to_string(count).size());
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s%0*zu", prefix, width, i + 1);
  return buf;
}

}  // namespace detail

/// Each planted cluster responds over one contiguous window of 1 to 4
/// conditions, where its genes are expressed at a cluster-specific level
/// plus a random profile; elsewhere its true expression lies below the
/// detection floor. Observed values are true values plus Gaussian noise,
/// thresholded at the floor, so inactive stretches read as exact ties.
///
/// Clusters are indexed in order of increasing noise-free profile norm and
/// sized by equal_part_sizes(); gene rows are shuffled. Fully determined by
/// the seed.
inline SyntheticData generate_synthetic(const SyntheticSpec& spec) {
  if (spec.genes == 0 || spec.conditions == 0 || spec.planted_clusters == 0) {
    throw ConfigError("synthetic data needs at least one gene, condition and cluster");
  }
  if (spec.planted_clusters > spec.genes) throw ConfigError("more planted clusters than genes");
  if (!(spec.missing_fraction >= 0.0 && spec.missing_fraction < 1.0)) {
    throw ConfigError("missing fraction must lie in [0, 1)");
  }
  if (!(spec.noise >= 0.0)) throw ConfigError("noise must be non-negative");

  constexpr double floor = 0.0;
  constexpr double inactive_level = floor - 3.0;
  constexpr std::size_t max_window = 4;
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);

  const auto k = spec.planted_clusters;
  // Contiguous response window per cluster.
  std::vector<std::vector<bool>> active(k, std::vector<bool>(spec.conditions, false));
  std::uniform_int_distribution<std::size_t> window_len(1, std::min<std::size_t>(max_window, spec.conditions));
  for (std::size_t c = 0; c < k; ++c) {
    const auto len = window_len(rng);
    std::uniform_int_distribution<std::size_t> first(0, spec.conditions - len);
    const auto start = first(rng);
    for (std::size_t t = start; t < start + len; ++t) active[c][t] = true;
  }

  std::vector<std::vector<double>> profiles(k, std::vector<double>(spec.conditions));
  for (std::size_t c = 0; c < k; ++c) {
    const double level = 4.0 + 6.0 * unit(rng);
    for (std::size_t t = 0; t < spec.conditions; ++t) {
      profiles[c][t] = active[c][t] ? level + 3.0 * unit(rng) : inactive_level;
    }
  }
  auto observed_norm = [&](const std::vector<double>& p) {
    double sum = 0.0;
    for (double x : p) sum += std::max(x, floor) * std::max(x, floor);
    return sum;
  };
  std::stable_sort(profiles.begin(), profiles.end(),
                   [&](const auto& a, const auto& b) { return observed_norm(a) < observed_norm(b); });

  std::vector<std::size_t> planted;
  const auto sizes = equal_part_sizes(spec.genes, spec.planted_clusters);
  for (std::size_t c = 0; c < sizes.size(); ++c) planted.insert(planted.end(), sizes[c], c);
  std::shuffle(planted.begin(), planted.end(), rng);

  std::vector<std::optional<double>> values;
  values.reserve(spec.genes * spec.conditions);
  for (std::size_t g = 0; g < spec.genes; ++g) {
    for (std::size_t t = 0; t < spec.conditions; ++t) {
      double v = profiles[planted[g]][t];
      if (spec.noise > 0.0) v += spec.noise * gauss(rng);
      values.emplace_back(std::max(v, floor));
    }
  }

  const auto missing = static_cast<std::size_t>(spec.missing_fraction * static_cast<double>(values.size()));
  if (missing > 0) {
    std::vector<std::size_t> cells(values.size());
    std::iota(cells.begin(), cells.end(), std::size_t{0});
    std::shuffle(cells.begin(), cells.end(), rng);
    for (std::size_t i = 0; i < missing; ++i) values[cells[i]].reset();
  }

  std::vector<std::string> gene_ids(spec.genes);
  for (std::size_t g = 0; g < spec.genes; ++g) gene_ids[g] = detail::padded_id("G", g, spec.genes);
  std::vector<std::string> condition_ids(spec.conditions);
  for (std::size_t t = 0; t < spec.conditions; ++t) condition_ids[t] = detail::padded_id("T", t, spec.conditions);

  return {ExpressionMatrix(std::move(gene_ids), std::move(condition_ids), std::move(values)),
          std::move(planted)};
}

}  // namespace roughkm
