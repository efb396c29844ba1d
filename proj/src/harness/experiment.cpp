#include "tsrg/harness/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <set>
#include <thread>

#include "tsrg/errors.hpp"

namespace tsrg::harness {

DomainPair make_domains(const Samples& source, const Samples& target,
                        std::string source_name, std::string target_name,
                        const std::optional<LabelMap>& label_map) {
  const Samples src = label_map ? apply_label_map(source, *label_map) : source;
  const Samples tgt = label_map ? apply_label_map(target, *label_map) : target;
  if (src.features.d() != tgt.features.d()) {
    throw DimensionError("source has d=" + std::to_string(src.features.d()) +
                         " but target has d=" + std::to_string(tgt.features.d()));
  }
  const auto classes = sorted_classes(src.labels);
  for (const auto& label : sorted_classes(tgt.labels)) {
    if (!std::binary_search(classes.begin(), classes.end(), label)) {
      throw LabelMapError("target class '" + label + "' does not occur in the source");
    }
  }
  return {std::move(source_name), std::move(target_name), encode(src, classes),
          encode(tgt, classes)};
}

DomainPair load_domains(const ExperimentConfig& config) {
  const Samples source = load_samples(config.source);
  const Samples target = load_samples(config.target);
  return make_domains(source, target,
                      config.source_name.empty() ? config.source.stem().string()
                                                 : config.source_name,
                      config.target_name.empty() ? config.target.stem().string()
                                                 : config.target_name,
                      config.label_map);
}

Standardizer Standardizer::fit(const FeatureMatrix& x) {
  Standardizer s;
  s.mean = x.data().rowwise().mean();
  const Eigen::MatrixXd centered = x.data().colwise() - s.mean;
  s.scale = (centered.array().square().rowwise().sum() / static_cast<double>(x.n())).sqrt();
  for (Eigen::Index i = 0; i < s.scale.size(); ++i) {
    if (!(s.scale(i) > 0.0)) s.scale(i) = 1.0;
  }
  return s;
}

FeatureMatrix Standardizer::apply(const FeatureMatrix& x) const {
  if (x.d() != mean.size()) throw DimensionError("standardizer dimension mismatch");
  Eigen::MatrixXd out = x.data().colwise() - mean;
  out.array().colwise() /= scale.array();
  return FeatureMatrix(std::move(out));
}

RunSettings settings_from(const ExperimentConfig& config) {
  return {config.kernel, config.solver, config.penalty_c, config.standardize,
          config.train_on_regenerated};
}

namespace {

// Everything computed from the source and the unlabeled target features.
struct Prepared {
  FeatureMatrix x_s;
  FeatureMatrix x_t;
  AugmentedKernels ak;
  LinearClassifier source_classifier;
  EvalReport baseline;
  double mmd_before = 0.0;
};

Prepared prepare(const DomainPair& domains, const RunSettings& settings) {
  Prepared p;
  p.x_s = domains.source.features;
  p.x_t = domains.target.features;
  if (settings.standardize) {
    const Standardizer z = Standardizer::fit(p.x_s);
    p.x_s = z.apply(p.x_s);
    p.x_t = z.apply(p.x_t);
  }
  LabeledDataset train_set{p.x_s, domains.source.labels, domains.source.class_names};
  p.source_classifier = train(train_set, settings.penalty_c);

  const int k = static_cast<int>(domains.source.class_names.size());
  p.baseline = evaluate(domains.target.labels, predict(p.source_classifier, p.x_t), k,
                        domains.source.class_names);
  p.ak = build_augmented(p.x_s, p.x_t, settings.kernel);
  p.mmd_before = mmd(p.x_s, p.x_t, p.ak.kernel);
  return p;
}

ExperimentResult run_prepared(const Prepared& p, const DomainPair& domains,
                              const RunSettings& settings, const SolverConfig& solver) {
  ExperimentResult result;
  result.baseline = p.baseline;
  result.mmd_before = p.mmd_before;

  FitResult fitted = fit(p.x_s, p.x_t, p.ak, solver);
  const FeatureMatrix regenerated_target = regenerate(fitted.model, p.x_t);
  if (settings.train_on_regenerated) {
    LabeledDataset train_set{regenerate(fitted.model, p.x_s), domains.source.labels,
                             domains.source.class_names};
    result.classifier = train(train_set, settings.penalty_c);
  } else {
    result.classifier = p.source_classifier;
  }
  const int k = static_cast<int>(domains.source.class_names.size());
  result.tsrg = evaluate(domains.target.labels, predict(result.classifier, regenerated_target),
                         k, domains.source.class_names);
  result.mmd_after = mmd(p.x_s, regenerated_target, p.ak.kernel);
  result.trace = std::move(fitted.trace);
  result.model = std::move(fitted.model);
  return result;
}

}  // namespace

ExperimentResult run_experiment(const DomainPair& domains, const RunSettings& settings) {
  settings.solver.validate();
  return run_prepared(prepare(domains, settings), domains, settings, settings.solver);
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  return run_experiment(load_domains(config), settings_from(config));
}

GridResult grid_search(const DomainPair& domains, const RunSettings& settings,
                       const std::vector<double>& lambda_grid,
                       const std::vector<double>& mu_grid, unsigned threads) {
  if (lambda_grid.empty() || mu_grid.empty()) {
    throw ConfigError("grid search needs non-empty lambda and mu grids");
  }
  std::vector<SolverConfig> cells;
  for (double lambda : lambda_grid) {
    for (double mu : mu_grid) {
      SolverConfig c = settings.solver;
      c.lambda = lambda;
      c.mu = mu;
      c.validate();
      cells.push_back(c);
    }
  }

  const Prepared prepared = prepare(domains, settings);
  GridResult result;
  result.baseline = prepared.baseline;
  result.mmd_before = prepared.mmd_before;
  result.rows.resize(cells.size());
  std::vector<std::exception_ptr> errors(cells.size());

  // Cells are independent and deterministic, so the schedule cannot change
  // any row; each worker writes only its own slots.
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      try {
        const ExperimentResult r = run_prepared(prepared, domains, settings, cells[i]);
        result.rows[i] = {cells[i].lambda, cells[i].mu, r.tsrg, r.mmd_after,
                          r.trace.converged, r.trace.iters_run, false};
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(cells.size()));
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  for (std::size_t i = 1; i < result.rows.size(); ++i) {
    const auto& cand = result.rows[i].report;
    const auto& best = result.rows[result.best_index].report;
    if (cand.uar > best.uar || (cand.uar == best.uar && cand.war > best.war)) {
      result.best_index = i;
    }
  }
  result.rows[result.best_index].best = true;
  return result;
}

}  // namespace tsrg::harness
