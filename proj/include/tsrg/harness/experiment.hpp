#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "tsrg/classifier.hpp"
#include "tsrg/harness/dataset_io.hpp"
#include "tsrg/harness/label_map.hpp"
#include "tsrg/kernels.hpp"
#include "tsrg/metrics.hpp"
#include "tsrg/solver.hpp"

namespace tsrg::harness {

struct ExperimentConfig {
  std::filesystem::path source;  // .csv, .bin or .manifest
  std::filesystem::path target;
  std::string source_name;  // defaults to the file stem
  std::string target_name;
  KernelSpec kernel = KernelSpec::linear();
  SolverConfig solver;
  double penalty_c = 1.0;
  std::optional<LabelMap> label_map;  // applied to both datasets
  bool standardize = false;           // z-score fitted on the source only
  bool train_on_regenerated = false;  // classifier on G(X_s) instead of X_s
  std::uint64_t seed = 0;
};

/// Both domains with class ids drawn from one shared, sorted class list.
struct DomainPair {
  std::string source_name;
  std::string target_name;
  LabeledDataset source;
  LabeledDataset target;
};

/// Loads, remaps and encodes both datasets. Target classes must be a subset
/// of the source classes.
DomainPair load_domains(const ExperimentConfig& config);
DomainPair make_domains(const Samples& source, const Samples& target,
                        std::string source_name, std::string target_name,
                        const std::optional<LabelMap>& label_map = std::nullopt);

/// Per-dimension z-scoring using source statistics; zero-variance dimensions
/// are only centered.
struct Standardizer {
  Eigen::VectorXd mean;
  Eigen::VectorXd scale;

  static Standardizer fit(const FeatureMatrix& x);
  FeatureMatrix apply(const FeatureMatrix& x) const;
};

struct ExperimentResult {
  EvalReport baseline;
  EvalReport tsrg;
  SolverTrace trace;
  TsrgModel model;
  LinearClassifier classifier;  // the one used on regenerated targets
  double mmd_before = 0.0;      // mmd(X_s, X_t)
  double mmd_after = 0.0;       // mmd(X_s, G(X_t))
};

struct RunSettings {
  KernelSpec kernel = KernelSpec::linear();
  SolverConfig solver;
  double penalty_c = 1.0;
  bool standardize = false;
  bool train_on_regenerated = false;
};

RunSettings settings_from(const ExperimentConfig& config);

/// Baseline: train on X_s, predict X_t. TSRG: fit on (X_s, X_t) features
/// only, predict G(X_t). Target labels are touched only by evaluate().
ExperimentResult run_experiment(const DomainPair& domains, const RunSettings& settings);
ExperimentResult run_experiment(const ExperimentConfig& config);

struct GridRow {
  double lambda = 0.0;
  double mu = 0.0;
  EvalReport report;
  double mmd_after = 0.0;
  bool converged = false;
  int iters = 0;
  bool best = false;

  bool operator==(const GridRow&) const = default;
};

struct GridResult {
  EvalReport baseline;
  double mmd_before = 0.0;
  std::vector<GridRow> rows;  // lambda-major, then mu, in grid order
  std::size_t best_index = 0;
};

/// One run per (lambda, mu) cell, cells spread over `threads` workers
/// (0 = hardware concurrency). Best = highest UAR, then WAR; ties keep the
/// earlier cell.
GridResult grid_search(const DomainPair& domains, const RunSettings& settings,
                       const std::vector<double>& lambda_grid,
                       const std::vector<double>& mu_grid, unsigned threads = 0);

}  // namespace tsrg::harness
