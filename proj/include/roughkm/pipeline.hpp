#pragma once

// End-to-end pipeline: parse, filter, normalize, discretize, select genes,
// cluster and score, with report emission.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "roughkm/clustering.hpp"
#include "roughkm/data_model.hpp"
#include "roughkm/error.hpp"
#include "roughkm/evaluation.hpp"
#include "roughkm/roughset.hpp"
#include "roughkm/serialize.hpp"

namespace roughkm {

struct PipelineConfig {
  std::string input;
  Orientation orientation = Orientation::genes_as_rows;
  std::optional<char> delimiter;  // default: from the input file extension
  NormalizationParams normalization;
  bool select = true;
  std::size_t k = 7;
  SeedStrategy strategy = SeedStrategy::ecia;
  std::optional<std::uint64_t> seed;  // required iff strategy is random
  KMeansMode mode = KMeansMode::exact;
  std::size_t max_iters = default_max_iters;
  std::size_t runs = 1;
  std::string out_dir;  // empty: write nothing
  std::set<std::string> formats{"json", "tsv"};
  bool include_timings = true;

  void validate() const {
    if (k == 0) throw ConfigError("k must be at least 1");
    if (!(normalization.new_min < normalization.new_max)) {
      throw ConfigError("new_min must be less than new_max");
    }
    if (strategy == SeedStrategy::random && !seed) throw ConfigError("the random strategy requires a seed");
    if (strategy == SeedStrategy::ecia && seed) throw ConfigError("a seed is only meaningful with the random strategy");
    if (max_iters == 0) throw ConfigError("max_iters must be at least 1");
    if (runs == 0) throw ConfigError("runs must be at least 1");
    if (formats.empty()) throw ConfigError("at least one output format is required");
    for (const auto& f : formats) {
      if (f != "json" && f != "tsv") throw ConfigError("unknown output format '" + f + "'");
    }
  }
};

struct Shape {
  std::size_t genes = 0;
  std::size_t conditions = 0;
  friend bool operator==(const Shape&, const Shape&) = default;
};

inline Shape shape_of(const ExpressionMatrix& m) { return {m.rows(), m.cols()}; }

struct RunSummary {
  std::size_t run = 0;
  std::optional<std::uint64_t> seed;
  double wcss = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  std::optional<double> global_mean_s;
  bool identical_to_first = true;
};

struct PipelineReport {
  PipelineConfig config;
  Shape input_shape;
  Shape shape_before;  // after dropping incomplete genes, before selection
  Shape shape_after;
  std::vector<std::string> warnings;

  ExpressionMatrix normalized;
  DiscretizedMatrix discretized;
  std::optional<Reduct> reduct;  // absent when selection is off
  ExpressionMatrix selected;
  Dataset dataset;
  ClusterAssignment assignment;               // first run
  std::optional<SilhouetteReport> silhouette;  // absent with fewer than two non-empty clusters
  std::vector<RunSummary> runs;
  std::vector<std::pair<std::string, double>> timings_ms;
};

namespace detail {

template <class F>
auto timed_stage(PipelineReport& report, const std::string& name, F&& body) {
  const auto start = std::chrono::steady_clock::now();
  auto record = [&] {
    const std::chrono::duration<double, std::milli> took = std::chrono::steady_clock::now() - start;
    report.timings_ms.emplace_back(name, took.count());
  };
  try {
    auto result = body();
    record();
    return result;
  } catch (const ConfigError&) {
    throw;
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(name, e.what());
  }
}

inline bool same_assignment(const ClusterAssignment& a, const ClusterAssignment& b) {
  return a.labels == b.labels && a.centroids.vectors == b.centroids.vectors && a.wcss == b.wcss &&
         a.iterations == b.iterations && a.converged == b.converged;
}

}  // namespace detail

/// Runs every stage after parsing on an in-memory matrix.
inline PipelineReport run_pipeline(const ExpressionMatrix& input, const PipelineConfig& config) {
  config.validate();
  PipelineReport r;
  r.config = config;
  r.input_shape = shape_of(input);

  const auto complete = detail::timed_stage(r, "filter", [&] { return drop_incomplete_genes(input); });
  r.shape_before = shape_of(complete);

  r.normalized = detail::timed_stage(r, "normalize", [&] {
    return min_max_normalize(complete, config.normalization, &r.warnings);
  });
  r.discretized = detail::timed_stage(r, "discretize", [&] { return discretize(r.normalized); });

  r.selected = detail::timed_stage(r, "select", [&] {
    if (!config.select) return r.normalized;
    auto selection = select_genes(r.normalized, r.discretized);
    r.reduct = std::move(selection.reduct);
    return std::move(selection.matrix);
  });
  r.shape_after = shape_of(r.selected);

  if (config.k > r.shape_after.genes) {
    throw ConfigError("k = " + std::to_string(config.k) + " exceeds the " + std::to_string(r.shape_after.genes) +
                      " genes remaining after selection");
  }
  r.dataset = Dataset::from_matrix(r.selected);

  for (std::size_t run = 0; run < config.runs; ++run) {
    ClusterOptions opt{config.k, config.strategy, config.seed.value_or(0) + run, config.mode, config.max_iters};
    auto assignment = detail::timed_stage(r, "cluster", [&] { return cluster_pipeline(r.selected, opt); });
    const auto sizes = assignment.cluster_sizes();
    const auto non_empty = std::count_if(sizes.begin(), sizes.end(), [](std::size_t s) { return s > 0; });
    std::optional<SilhouetteReport> silhouette;
    if (non_empty >= 2) {
      silhouette = detail::timed_stage(r, "evaluate", [&] { return silhouette_scores(r.dataset, assignment); });
    } else if (run == 0) {
      r.warnings.push_back("fewer than two non-empty clusters; silhouette not defined");
    }

    RunSummary summary;
    summary.run = run + 1;
    if (config.strategy == SeedStrategy::random) summary.seed = opt.seed;
    summary.wcss = assignment.wcss;
    summary.iterations = assignment.iterations;
    summary.converged = assignment.converged;
    if (silhouette) summary.global_mean_s = silhouette->global_mean_s;
    if (run == 0) {
      r.assignment = std::move(assignment);
      r.silhouette = std::move(silhouette);
    } else {
      summary.identical_to_first = detail::same_assignment(r.assignment, assignment);
      if (config.strategy == SeedStrategy::ecia && !summary.identical_to_first) {
        throw StageError("cluster", "ECIA run " + std::to_string(run + 1) + " differs from run 1");
      }
    }
    r.runs.push_back(summary);
  }
  return r;
}

namespace detail {

inline json shape_json(const Shape& s) { return {{"genes", s.genes}, {"conditions", s.conditions}}; }

inline json mean_variance(const std::vector<double>& xs) {
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double var = 0.0;
  for (double x : xs) var += (x - mean) * (x - mean);
  var /= static_cast<double>(xs.size());
  return {{"mean", mean}, {"variance", var}};
}

}  // namespace detail

/// The summary report. Timings are the only non-deterministic content.
inline json report_json(const PipelineReport& r, bool include_timings) {
  const auto& c = r.config;
  json config = {{"input", c.input},
                 {"orientation", c.orientation == Orientation::genes_as_rows ? "genes-as-rows" : "genes-as-columns"},
                 {"new_min", c.normalization.new_min},
                 {"new_max", c.normalization.new_max},
                 {"select", c.select},
                 {"k", c.k},
                 {"strategy", to_string(c.strategy)},
                 {"seed", c.seed ? json(*c.seed) : json(nullptr)},
                 {"mode", to_string(c.mode)},
                 {"max_iters", c.max_iters},
                 {"runs", c.runs}};

  const auto sizes = r.assignment.cluster_sizes();
  json clusters = json::array();
  for (std::size_t j = 0; j < sizes.size(); ++j) {
    json row = {{"cluster", cluster_name(j)}, {"genes", sizes[j]}, {"mean_silhouette", nullptr}};
    if (r.silhouette) {
      for (const auto& pc : r.silhouette->per_cluster) {
        if (pc.cluster == j) row["mean_silhouette"] = pc.mean_s;
      }
    }
    clusters.push_back(std::move(row));
  }

  json runs = json::array();
  std::vector<double> wcss;
  std::vector<double> mean_s;
  for (const auto& run : r.runs) {
    runs.push_back({{"run", run.run},
                    {"seed", run.seed ? json(*run.seed) : json(nullptr)},
                    {"wcss", run.wcss},
                    {"iterations", run.iterations},
                    {"converged", run.converged},
                    {"global_mean_silhouette", run.global_mean_s ? json(*run.global_mean_s) : json(nullptr)},
                    {"identical_to_first", run.identical_to_first}});
    wcss.push_back(run.wcss);
    if (run.global_mean_s) mean_s.push_back(*run.global_mean_s);
  }
  json run_stats = {{"wcss", detail::mean_variance(wcss)},
                    {"global_mean_silhouette", mean_s.empty() ? json(nullptr) : detail::mean_variance(mean_s)}};

  json out = {
      {"config", std::move(config)},
      {"input_shape", detail::shape_json(r.input_shape)},
      {"dropped_genes", r.input_shape.genes - r.shape_before.genes},
      {"shape_before", detail::shape_json(r.shape_before)},
      {"shape_after", detail::shape_json(r.shape_after)},
      {"warnings", r.warnings},
      {"selection", r.reduct ? json{{"selected", r.reduct->selected_ids},
                                    {"rounds", r.reduct->trace.size()},
                                    {"final_mean_dependency", to_json(r.reduct->final_mean_dependency)},
                                    {"full_mean_dependency", to_json(r.reduct->full_mean_dependency)}}
                             : json(nullptr)},
      {"clustering",
       {{"strategy", to_string(c.strategy)},
        {"mode", to_string(c.mode)},
        {"k", c.k},
        {"iterations", r.assignment.iterations},
        {"converged", r.assignment.converged},
        {"wcss", r.assignment.wcss}}},
      {"clusters", std::move(clusters)},
      {"total_genes", r.shape_after.genes},
      {"compact_cluster", r.silhouette ? json{{"cluster", cluster_name(r.silhouette->compact_cluster)},
                                              {"genes", sizes[r.silhouette->compact_cluster]}}
                                       : json(nullptr)},
      {"global_mean_silhouette", r.silhouette ? json(r.silhouette->global_mean_s) : json(nullptr)},
      {"runs", std::move(runs)},
      {"run_statistics", std::move(run_stats)},
  };
  if (include_timings) {
    json timings = json::object();
    for (const auto& [stage, ms] : r.timings_ms) {
      timings[stage] = timings.contains(stage) ? timings[stage].get<double>() + ms : ms;
    }
    out["timings_ms"] = std::move(timings);
  }
  return out;
}

/// Human-readable summary in the layout of a selection / per-cluster / compact
/// cluster table.
inline std::string summary_text(const PipelineReport& r) {
  std::ostringstream os;
  os << "genes x conditions: " << r.input_shape.genes << "*" << r.input_shape.conditions;
  if (r.shape_before.genes != r.input_shape.genes) {
    os << " -> " << r.shape_before.genes << "*" << r.shape_before.conditions << " (complete)";
  }
  os << " -> " << r.shape_after.genes << "*" << r.shape_after.conditions
     << (r.config.select ? " (selected)" : " (selection off)") << '\n';
  if (r.reduct) {
    os << "mean dependency: " << r.reduct->final_mean_dependency.str() << " (full set "
       << r.reduct->full_mean_dependency.str() << ") after " << r.reduct->trace.size() << " rounds\n";
  }
  os << "k-means: " << to_string(r.config.strategy) << ", " << to_string(r.config.mode) << ", k=" << r.config.k
     << ", iterations=" << r.assignment.iterations << (r.assignment.converged ? " (converged)" : " (not converged)")
     << ", wcss=" << r.assignment.wcss << '\n';
  os << "cluster\tgenes\tmean silhouette\n";
  const auto sizes = r.assignment.cluster_sizes();
  for (std::size_t j = 0; j < sizes.size(); ++j) {
    os << cluster_name(j) << '\t' << sizes[j] << '\t';
    bool found = false;
    if (r.silhouette) {
      for (const auto& pc : r.silhouette->per_cluster) {
        if (pc.cluster == j) {
          os << pc.mean_s;
          found = true;
        }
      }
    }
    if (!found) os << '-';
    os << '\n';
  }
  os << "total genes\t" << r.shape_after.genes << '\n';
  if (r.silhouette) {
    os << "compact cluster: " << cluster_name(r.silhouette->compact_cluster) << " ("
       << sizes[r.silhouette->compact_cluster] << " genes), global mean silhouette " << r.silhouette->global_mean_s
       << '\n';
  }
  if (r.runs.size() > 1) {
    os << "runs: " << r.runs.size();
    if (r.config.strategy == SeedStrategy::ecia) os << " (all identical)";
    os << '\n';
  }
  for (const auto& w : r.warnings) os << "warning: " << w << '\n';
  return os.str();
}

namespace detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw StageError("write", "cannot write '" + path.string() + "'");
}

}  // namespace detail

inline ExpressionMatrix load_matrix(const std::string& path, Orientation orientation,
                                    std::optional<char> delimiter = std::nullopt) {
  const auto text = detail::read_file(path);
  try {
    return parse_matrix(text, orientation, delimiter.value_or(delimiter_for_path(path)));
  } catch (const ParseError& e) {
    throw InputError("stage 'parse' failed: " + path + ": " + e.what());
  } catch (const ValidationError& e) {
    throw InputError("stage 'parse' failed: " + path + ": " + e.what());
  }
}

/// Writes every artifact of a finished run into `dir`.
inline void write_artifacts(const PipelineReport& r, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw StageError("write", "cannot create '" + dir.string() + "': " + ec.message());

  const char delim = r.config.delimiter.value_or(r.config.input.empty() ? '\t' : delimiter_for_path(r.config.input));
  const std::string ext = delim == ',' ? ".csv" : ".tsv";
  detail::write_file(dir / ("normalized" + ext), write_matrix(r.normalized, delim));
  detail::write_file(dir / ("discretized" + ext), write_discretized(r.discretized, delim));

  const auto& formats = r.config.formats;
  if (formats.count("json")) {
    detail::write_file(dir / "report.json", report_json(r, r.config.include_timings).dump(2) + "\n");
    if (r.reduct) {
      detail::write_file(dir / "reduct.json", to_json(*r.reduct, r.normalized.gene_ids()).dump(2) + "\n");
    }
    detail::write_file(dir / "assignment.json", to_json(r.assignment, r.dataset).dump(2) + "\n");
    if (r.silhouette) detail::write_file(dir / "silhouette.json", to_json(*r.silhouette).dump(2) + "\n");
  }
  if (formats.count("tsv")) {
    detail::write_file(dir / "assignment.tsv", assignment_tsv(r.assignment, r.dataset));
    detail::write_file(dir / "centroids.tsv", centroids_tsv(r.assignment, r.selected.condition_ids()));
    if (r.silhouette) {
      detail::write_file(dir / "silhouette_clusters.tsv", silhouette_clusters_tsv(*r.silhouette));
      detail::write_file(dir / "silhouette_points.tsv", silhouette_points_tsv(*r.silhouette));
    }
  }
}

/// Reads `config.input`, runs the pipeline and writes artifacts when
/// `config.out_dir` is set.
inline PipelineReport run_pipeline(const PipelineConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  auto matrix = load_matrix(config.input, config.orientation, config.delimiter);
  const std::chrono::duration<double, std::milli> parse_ms = std::chrono::steady_clock::now() - start;
  auto report = run_pipeline(matrix, config);
  report.timings_ms.insert(report.timings_ms.begin(), {"parse", parse_ms.count()});
  if (!config.out_dir.empty()) write_artifacts(report, config.out_dir);
  return report;
}

}  // namespace roughkm
