// roughkm: rough-set gene selection + ECIA-seeded K-Means from the command line.
//
//   roughkm run --input data.tsv [--k 7] [--strategy ecia|random --seed N] ...
//   roughkm generate --output synthetic.tsv [--genes 300 --conditions 17 ...]
//   roughkm evaluate --input normalized.tsv --assignment assignment.tsv

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "roughkm/roughkm.hpp"

namespace {

using namespace roughkm;

std::optional<char> parse_delimiter(const std::string& name) {
  if (name.empty()) return std::nullopt;
  if (name == "tab" || name == "\\t") return '\t';
  if (name == "comma" || name == ",") return ',';
  if (name.size() == 1) return name[0];
  throw ConfigError("unknown delimiter '" + name + "' (use tab, comma or a single character)");
}

const std::map<std::string, Orientation> orientations{{"genes-as-rows", Orientation::genes_as_rows},
                                                      {"genes-as-columns", Orientation::genes_as_columns}};

struct RunArgs {
  std::string input;
  Orientation orientation = Orientation::genes_as_rows;
  std::string delimiter;
  double new_min = 0.0;
  double new_max = 1.0;
  bool no_select = false;
  std::size_t k = 7;
  SeedStrategy strategy = SeedStrategy::ecia;
  std::optional<std::uint64_t> seed;
  KMeansMode mode = KMeansMode::exact;
  std::size_t max_iters = default_max_iters;
  std::size_t runs = 1;
  std::string out;
  std::vector<std::string> formats{"json", "tsv"};
  bool no_timings = false;
};

int cmd_run(const RunArgs& a) {
  PipelineConfig c;
  c.input = a.input;
  c.orientation = a.orientation;
  c.delimiter = parse_delimiter(a.delimiter);
  c.normalization = {a.new_min, a.new_max};
  c.select = !a.no_select;
  c.k = a.k;
  c.strategy = a.strategy;
  c.seed = a.seed;
  c.mode = a.mode;
  c.max_iters = a.max_iters;
  c.runs = a.runs;
  c.out_dir = a.out;
  c.formats = {a.formats.begin(), a.formats.end()};
  c.include_timings = !a.no_timings;
  const auto report = run_pipeline(c);
  std::cout << summary_text(report);
  return 0;
}

struct GenerateArgs {
  SyntheticSpec spec;
  std::string output;
  std::string labels;
};

int cmd_generate(const GenerateArgs& a) {
  const auto data = generate_synthetic(a.spec);
  const auto delim = delimiter_for_path(a.output);
  detail::write_file(a.output, write_matrix(data.matrix, delim));
  if (!a.labels.empty()) {
    std::string text = "gene\tcluster\n";
    for (std::size_t g = 0; g < data.labels.size(); ++g) {
      text += data.matrix.gene_ids()[g] + '\t' + cluster_name(data.labels[g]) + '\n';
    }
    detail::write_file(a.labels, text);
  }
  std::cout << "wrote " << data.matrix.rows() << "*" << data.matrix.cols() << " matrix to " << a.output << " ("
            << data.matrix.missing_count() << " missing entries)\n";
  return 0;
}

struct EvaluateArgs {
  std::string input;
  Orientation orientation = Orientation::genes_as_rows;
  std::string delimiter;
  std::string assignment;
  std::string out;
  std::vector<std::string> formats{"json", "tsv"};
};

int cmd_evaluate(const EvaluateArgs& a) {
  const auto matrix = load_matrix(a.input, a.orientation, parse_delimiter(a.delimiter));
  std::vector<LabelledGene> labelled;
  try {
    labelled = parse_assignment_tsv(detail::read_file(a.assignment));
  } catch (const ParseError& e) {
    throw InputError(a.assignment + ": " + e.what());
  }

  std::unordered_map<std::string, std::size_t> row_of;
  for (std::size_t r = 0; r < matrix.rows(); ++r) row_of.emplace(matrix.gene_ids()[r], r);
  std::vector<std::size_t> rows;
  std::vector<std::size_t> labels;
  for (const auto& lg : labelled) {
    auto it = row_of.find(lg.gene);
    if (it == row_of.end()) throw InputError("gene '" + lg.gene + "' is not in " + a.input);
    rows.push_back(it->second);
    labels.push_back(lg.cluster);
  }
  const auto data = Dataset::from_matrix(matrix.select_rows(rows));
  SilhouetteReport report;
  try {
    report = silhouette_scores(data, labels);
  } catch (const Error& e) {
    throw StageError("evaluate", e.what());
  }

  std::cout << "cluster\tgenes\tmean silhouette\n";
  for (const auto& c : report.per_cluster) std::cout << cluster_name(c.cluster) << '\t' << c.size << '\t' << c.mean_s << '\n';
  std::cout << "compact cluster: " << cluster_name(report.compact_cluster) << ", global mean silhouette "
            << report.global_mean_s << '\n';

  if (!a.out.empty()) {
    std::filesystem::create_directories(a.out);
    const std::filesystem::path dir(a.out);
    for (const auto& f : a.formats) {
      if (f == "json") detail::write_file(dir / "silhouette.json", to_json(report).dump(2) + "\n");
      if (f == "tsv") {
        detail::write_file(dir / "silhouette_clusters.tsv", silhouette_clusters_tsv(report));
        detail::write_file(dir / "silhouette_points.tsv", silhouette_points_tsv(report));
      }
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rough-set gene selection and ECIA-seeded K-Means clustering of expression matrices"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value configuration file; command line flags take precedence");

  const std::map<std::string, SeedStrategy> strategies{{"ecia", SeedStrategy::ecia}, {"random", SeedStrategy::random}};
  const std::map<std::string, KMeansMode> modes{{"exact", KMeansMode::exact}, {"shortcut", KMeansMode::shortcut}};

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Run the full pipeline on an expression matrix");
  run_cmd->add_option("--input", run.input, "Expression matrix (TSV or CSV)")->required();
  run_cmd->add_option("--orientation", run.orientation, "genes-as-rows or genes-as-columns")
      ->transform(CLI::CheckedTransformer(orientations, CLI::ignore_case));
  run_cmd->add_option("--delimiter", run.delimiter, "Field delimiter (default: from the file extension)");
  run_cmd->add_option("--new-min", run.new_min, "Normalization lower bound")->capture_default_str();
  run_cmd->add_option("--new-max", run.new_max, "Normalization upper bound")->capture_default_str();
  run_cmd->add_flag("--no-select", run.no_select, "Skip gene selection and cluster every gene");
  run_cmd->add_option("--k", run.k, "Number of clusters")->capture_default_str();
  run_cmd->add_option("--strategy", run.strategy, "Centroid seeding: ecia or random")
      ->transform(CLI::CheckedTransformer(strategies, CLI::ignore_case));
  run_cmd->add_option("--seed", run.seed, "Seed for the random strategy");
  run_cmd->add_option("--mode", run.mode, "exact (full reassignment) or shortcut (approximate)")
      ->transform(CLI::CheckedTransformer(modes, CLI::ignore_case));
  run_cmd->add_option("--max-iters", run.max_iters, "Iteration cap")->capture_default_str();
  run_cmd->add_option("--runs", run.runs, "Repeat the clustering stage this many times")->capture_default_str();
  run_cmd->add_option("--out", run.out, "Output directory for artifacts");
  run_cmd->add_option("--format", run.formats, "Report formats: json, tsv")
      ->delimiter(',')
      ->check(CLI::IsMember({"json", "tsv"}));
  run_cmd->add_flag("--no-timings", run.no_timings, "Omit stage timings from report.json");

  GenerateArgs gen;
  auto* gen_cmd = app.add_subcommand("generate", "Write a synthetic planted-cluster expression matrix");
  gen_cmd->add_option("--output", gen.output, "Output matrix path")->required();
  gen_cmd->add_option("--labels", gen.labels, "Optional path for the planted labels");
  gen_cmd->add_option("--genes", gen.spec.genes)->capture_default_str();
  gen_cmd->add_option("--conditions", gen.spec.conditions)->capture_default_str();
  gen_cmd->add_option("--clusters", gen.spec.planted_clusters)->capture_default_str();
  gen_cmd->add_option("--noise", gen.spec.noise, "Gaussian noise standard deviation")->capture_default_str();
  gen_cmd->add_option("--missing", gen.spec.missing_fraction, "Fraction of entries left blank")
      ->capture_default_str();
  gen_cmd->add_option("--seed", gen.spec.seed)->capture_default_str();

  EvaluateArgs eval;
  auto* eval_cmd = app.add_subcommand("evaluate", "Silhouette scores for an existing assignment");
  eval_cmd->add_option("--input", eval.input, "Matrix the assignment was computed on")->required();
  eval_cmd->add_option("--assignment", eval.assignment, "Assignment TSV (gene, cluster, ...)")->required();
  eval_cmd->add_option("--orientation", eval.orientation)
      ->transform(CLI::CheckedTransformer(orientations, CLI::ignore_case));
  eval_cmd->add_option("--delimiter", eval.delimiter);
  eval_cmd->add_option("--out", eval.out, "Output directory");
  eval_cmd->add_option("--format", eval.formats)->delimiter(',')->check(CLI::IsMember({"json", "tsv"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return static_cast<int>(ExitCode::config);
  }

  try {
    if (*run_cmd) return cmd_run(run);
    if (*gen_cmd) return cmd_generate(gen);
    if (*eval_cmd) return cmd_evaluate(eval);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(e.exit_code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::stage);
  }
  return 0;
}
