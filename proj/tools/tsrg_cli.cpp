// Command-line harness: feature extraction, synthetic benchmark generation,
// single experiments, (lambda, mu) grid search and report rendering.

#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "tsrg/classifier.hpp"
#include "tsrg/errors.hpp"
#include "tsrg/harness/config.hpp"
#include "tsrg/harness/dataset_io.hpp"
#include "tsrg/harness/experiment.hpp"
#include "tsrg/harness/label_map.hpp"
#include "tsrg/harness/manifest.hpp"
#include "tsrg/harness/report_io.hpp"
#include "tsrg/harness/synth.hpp"
#include "tsrg/harness/text.hpp"
#include "tsrg/lbptop.hpp"
#include "tsrg/model_io.hpp"

namespace fs = std::filesystem;
using namespace tsrg;
using namespace tsrg::harness;

namespace {

// Options shared by `run` and `grid`. Flags are collected as key-value pairs
// and layered over the optional config file.
struct ExperimentFlags {
  std::string config_file;
  std::map<std::string, std::string> overrides;
  std::uint64_t seed = 0;
  std::string out_dir;
  bool synthetic = false;
  double synth_shift = 3.0;
  double synth_separation = 3.0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config_file, "Key-value config file");
    for (const char* key :
         {"source", "target", "source_name", "target_name", "kernel", "bandwidth", "lambda",
          "mu", "kappa0", "rho", "kappa_max", "epsilon", "max_iters", "penalty_c",
          "label_map", "standardize", "train_on_regenerated"}) {
      std::string flag = std::string("--") + key;
      for (auto& ch : flag) {
        if (ch == '_') ch = '-';
      }
      cmd->add_option_function<std::string>(
          flag, [this, k = std::string(key)](const std::string& v) { overrides[k] = v; },
          std::string("Overrides config key '") + key + "'");
    }
    cmd->add_option("--seed", seed, "Experiment seed")->required();
    cmd->add_option("--out-dir", out_dir, "Output directory")->required();
    cmd->add_flag("--synthetic", synthetic,
                  "Generate the shifted-Gaussian benchmark pair from --seed instead of "
                  "reading source/target");
    cmd->add_option("--synth-shift", synth_shift, "Benchmark target shift in sigmas");
    cmd->add_option("--synth-separation", synth_separation,
                    "Benchmark class displacement in sigmas");
  }

  KeyValues merged() const {
    KeyValues kv = config_file.empty() ? KeyValues{} : read_key_values(config_file);
    for (const auto& [k, v] : overrides) kv[k] = v;
    if (synthetic) {
      kv.try_emplace("source", "synthetic");
      kv.try_emplace("target", "synthetic");
      kv.try_emplace("source_name", "synth-source");
      kv.try_emplace("target_name", "synth-target");
    }
    kv["seed"] = std::to_string(seed);
    return kv;
  }

  fs::path base_dir() const {
    return config_file.empty() ? fs::path{} : fs::path(config_file).parent_path();
  }

  DomainPair domains(const ExperimentConfig& config) const {
    if (!synthetic) return load_domains(config);
    const SynthPair pair = synth_generate(shifted_benchmark_spec(seed, synth_shift, synth_separation));
    return make_domains(pair.source, pair.target, config.source_name, config.target_name,
                        config.label_map);
  }
};

KeyValues without(KeyValues kv, std::initializer_list<const char*> keys) {
  for (const char* k : keys) kv.erase(k);
  return kv;
}

int cmd_extract(const std::string& manifest_path, const std::string& out,
                const lbptop::LbpTopParams& params, const std::string& label_map,
                const std::string& expect_counts) {
  const DatasetManifest manifest = read_manifest(manifest_path);
  Samples samples = ingest(manifest, params);
  if (!label_map.empty()) samples = apply_label_map(samples, parse_label_map(label_map));
  if (!expect_counts.empty()) {
    std::map<std::string, std::size_t> counts;
    for (const auto& l : samples.labels) ++counts[l];
    validate_counts(counts, parse_counts(expect_counts));
  }
  save_samples(out, samples);
  std::cout << "extracted " << samples.size() << " clips, d=" << samples.features.d()
            << " -> " << out << '\n';
  return 0;
}

int cmd_synth(const SynthSpec& spec, const std::string& out_dir, const std::string& format) {
  const SynthPair pair = synth_generate(spec);
  fs::create_directories(out_dir);
  const std::string ext = format == "bin" ? ".bin" : ".csv";
  save_samples(fs::path(out_dir) / ("source" + ext), pair.source);
  save_samples(fs::path(out_dir) / ("target" + ext), pair.target);
  std::cout << "wrote source/target" << ext << " (" << pair.source.size() << " + "
            << pair.target.size() << " samples, d=" << spec.dim << ") to " << out_dir << '\n';
  return 0;
}

int cmd_run(const ExperimentFlags& flags) {
  const KeyValues kv = flags.merged();
  const ExperimentConfig config =
      experiment_config_from(without(kv, {"lambda_grid", "mu_grid", "expect_counts"}),
                             flags.base_dir());
  const DomainPair domains = flags.domains(config);
  const ExperimentResult result = run_experiment(domains, settings_from(config));
  const auto records = experiment_records(domains, result, config.solver, config.seed);

  // Everything is computed before the first write.
  const fs::path out = flags.out_dir;
  fs::create_directories(out);
  write_jsonl(out / "reports.jsonl", records);
  write_file_atomic(out / "trace.csv", trace_csv(result.trace));
  write_file_atomic(out / "config.used", to_key_values(config));
  save_model(out / "model.tsrg", result.model);
  save_classifier(out / "classifier.json", result.classifier);
  const std::string summary = render_table(records) + '\n' + render_confusions(records);
  write_file_atomic(out / "summary.txt", summary);
  std::cout << summary;
  if (!result.trace.converged) {
    std::cerr << "warning: solver stopped at max_iters without converging\n";
  }
  return 0;
}

int cmd_grid(const ExperimentFlags& flags, const std::string& lambda_grid,
             const std::string& mu_grid, unsigned threads) {
  KeyValues kv = flags.merged();
  const std::string lambdas = !lambda_grid.empty() ? lambda_grid
                              : kv.contains("lambda_grid") ? kv.at("lambda_grid")
                                                           : "0.001,0.01,0.1,1,10,100";
  const std::string mus = !mu_grid.empty() ? mu_grid
                          : kv.contains("mu_grid") ? kv.at("mu_grid")
                                                   : "0.001,0.003,0.01,0.03,0.1";
  const ExperimentConfig config = experiment_config_from(
      without(kv, {"lambda_grid", "mu_grid", "expect_counts"}), flags.base_dir());
  const DomainPair domains = flags.domains(config);
  const GridResult grid = grid_search(domains, settings_from(config), parse_double_list(lambdas),
                                      parse_double_list(mus), threads);
  const auto records = grid_records(domains, grid, config.seed);

  const fs::path out = flags.out_dir;
  fs::create_directories(out);
  write_jsonl(out / "grid.jsonl", records);
  write_file_atomic(out / "config.used", to_key_values(config) + "lambda_grid = " + lambdas +
                                             "\nmu_grid = " + mus + '\n');
  const std::string summary = render_table(records);
  write_file_atomic(out / "summary.txt", summary);
  std::cout << summary;
  return 0;
}

int cmd_report(const std::string& in, bool confusion) {
  const auto records = read_jsonl(in);
  std::cout << render_table(records);
  if (confusion) std::cout << '\n' << render_confusions(records);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Target sample re-generator: domain adaptation pipeline"};
  app.require_subcommand(1);

  // extract
  auto* extract = app.add_subcommand("extract", "LBP-TOP features for every clip in a manifest");
  std::string manifest_path, extract_out, extract_map, extract_counts, grids_text = "1,2,4,8";
  lbptop::LbpTopParams params;
  bool non_uniform = false;
  bool raw_counts = false;
  extract->add_option("--manifest", manifest_path, "Clip manifest (path,label,subject)")->required();
  extract->add_option("--out", extract_out, "Output feature file (.csv or .bin)")->required();
  extract->add_option("--radius", params.radius, "LBP radius (space and time)");
  extract->add_option("--points", params.points, "Neighbors per circle");
  extract->add_option("--grids", grids_text, "Spatial grid sizes, comma separated");
  extract->add_flag("--no-uniform", non_uniform, "Keep all 2^P codes");
  extract->add_flag("--raw-counts", raw_counts, "Skip per-histogram normalization");
  extract->add_option("--label-map", extract_map, "Label rules, e.g. casme2 or A:B,C:-");
  extract->add_option("--expect-counts", extract_counts, "Class counts to validate, e.g. casme2");

  // synth
  auto* synth = app.add_subcommand("synth", "Write a synthetic shifted-Gaussian source/target pair");
  std::string synth_out, synth_format = "csv";
  std::uint64_t synth_seed = 0;
  int synth_classes = 3, synth_dim = 20, synth_src = 20, synth_tgt = 20;
  double synth_offset = 10.0, synth_sep = 3.0, synth_scale = 1.0, synth_shift = 3.0;
  std::string synth_axes = "0,1";
  synth->add_option("--out-dir", synth_out, "Output directory")->required();
  synth->add_option("--seed", synth_seed, "RNG seed")->required();
  synth->add_option("--classes", synth_classes, "Number of classes");
  synth->add_option("--dim", synth_dim, "Feature dimension");
  synth->add_option("--source-per-class", synth_src, "Source samples per class");
  synth->add_option("--target-per-class", synth_tgt, "Target samples per class");
  synth->add_option("--offset", synth_offset, "Common center coordinate");
  synth->add_option("--separation", synth_sep, "Class displacement along its own axis");
  synth->add_option("--scale", synth_scale, "Per-coordinate standard deviation");
  synth->add_option("--shift", synth_shift, "Target translation in units of --scale");
  synth->add_option("--shift-axes", synth_axes, "Axes the target is translated along");
  synth->add_option("--format", synth_format, "csv or bin")->check(CLI::IsMember({"csv", "bin"}));

  // run / grid
  auto* run = app.add_subcommand("run", "Baseline and TSRG on one source -> target pair");
  ExperimentFlags run_flags;
  run_flags.attach(run);

  auto* grid = app.add_subcommand("grid", "Grid search over (lambda, mu)");
  ExperimentFlags grid_flags;
  grid_flags.attach(grid);
  std::string lambda_grid, mu_grid;
  unsigned threads = 0;
  grid->add_option("--lambda-grid", lambda_grid, "Comma-separated lambda values");
  grid->add_option("--mu-grid", mu_grid, "Comma-separated mu values");
  grid->add_option("--threads", threads, "Worker threads (0 = all cores)");

  // report
  auto* report = app.add_subcommand("report", "Render a structured report as tables");
  std::string report_in;
  bool with_confusion = false;
  report->add_option("input", report_in, "reports.jsonl or grid.jsonl")->required();
  report->add_flag("--confusion", with_confusion, "Also print row-normalized confusions");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*extract) {
      params.grids.clear();
      for (double g : parse_double_list(grids_text)) params.grids.push_back(static_cast<int>(g));
      params.uniform = !non_uniform;
      params.normalize = !raw_counts;
      return cmd_extract(manifest_path, extract_out, params, extract_map, extract_counts);
    }
    if (*synth) {
      SynthSpec spec;
      spec.classes = synth_classes;
      spec.dim = synth_dim;
      spec.source_counts.assign(static_cast<std::size_t>(std::max(synth_classes, 0)), synth_src);
      spec.target_counts.assign(static_cast<std::size_t>(std::max(synth_classes, 0)), synth_tgt);
      spec.centers = Eigen::MatrixXd::Constant(synth_dim, std::max(synth_classes, 0), synth_offset);
      for (int c = 0; c < synth_classes; ++c) spec.centers(c % synth_dim, c) += synth_sep;
      spec.scale = synth_scale;
      spec.shift_matrix = Eigen::MatrixXd::Identity(synth_dim, synth_dim);
      spec.shift_offset = Eigen::VectorXd::Zero(synth_dim);
      for (double axis : parse_double_list(synth_axes)) {
        const int a = static_cast<int>(axis);
        if (a < 0 || a >= synth_dim) throw ConfigError("--shift-axes entry out of range");
        spec.shift_offset(a) = synth_shift * synth_scale;
      }
      spec.seed = synth_seed;
      return cmd_synth(spec, synth_out, synth_format);
    }
    if (*run) return cmd_run(run_flags);
    if (*grid) return cmd_grid(grid_flags, lambda_grid, mu_grid, threads);
    if (*report) return cmd_report(report_in, with_confusion);
  } catch (const tsrg::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
