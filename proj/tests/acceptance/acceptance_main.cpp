// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "solver_oracles.hpp"
#include "test_util.hpp"
#include "tsrg/errors.hpp"
#include "tsrg/harness/dataset_io.hpp"
#include "tsrg/harness/experiment.hpp"
#include "tsrg/harness/label_map.hpp"
#include "tsrg/harness/manifest.hpp"
#include "tsrg/harness/synth.hpp"
#include "tsrg/kernels.hpp"
#include "tsrg/lbptop.hpp"
#include "tsrg/metrics.hpp"
#include "tsrg/solver.hpp"

namespace fs = std::filesystem;
using namespace tsrg;
using tsrg::testing::random_features;
using tsrg::testing::random_matrix;
using tsrg::testing::rel_frobenius;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* pattern, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, pattern, args...);
  return buf;
}

SolverConfig solver_config(double lambda, double mu) {
  SolverConfig c;
  c.lambda = lambda;
  c.mu = mu;
  return c;
}

Outcome self_reconstruction() {
  const auto xs = random_features(5, 10, 101);
  const auto xt = random_features(5, 10, 102, 2.0);
  const auto start = Clock::now();
  const FitResult r = fit(xs, xt, KernelSpec::linear(), solver_config(0.0, 0.0));
  const double err = rel_frobenius(regenerate(r.model, xs).data(), xs.data());
  const double elapsed = seconds_since(start);
  return {r.trace.converged && err < 1e-6 && elapsed < 1.0,
          fmt("rel error %.3e (< 1e-6), converged=%d in %d iters, %.4f s (< 1 s)", err,
              r.trace.converged, r.trace.iters_run, elapsed)};
}

Outcome least_squares_oracle() {
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto xs = random_features(5, 10, 200 + seed);
    const auto xt = random_features(5, 10, 300 + seed, 1.5);
    const auto ak = build_augmented(xs, xt, KernelSpec::linear());
    const FitResult r = fit(xs, xt, ak, solver_config(0.0, 0.0));
    const Eigen::MatrixXd oracle = tsrg::testing::min_norm_least_squares(ak.k_s, xs.data());
    worst = std::max(worst, rel_frobenius(r.model.p, oracle));
  }
  return {worst < 1e-5, fmt("worst relative distance %.3e over 20 toys (< 1e-5)", worst)};
}

Outcome proximal_oracle() {
  std::mt19937_64 rng(401);
  std::uniform_real_distribution<double> v_dist(-1.0, 1.0), tau_dist(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double v = v_dist(rng), tau = tau_dist(rng);
    Eigen::MatrixXd q(1, 1);
    q << v;
    const double p = update_p(q, Eigen::MatrixXd::Zero(1, 1), 1.0, tau)(0, 0);
    worst = std::max(worst, std::abs(p - tsrg::testing::grid_prox(v, tau)));
  }
  return {worst < 2e-6, fmt("worst |prox - grid argmin| %.3e over 1000 pairs (< 2e-6)", worst)};
}

Outcome q_stationarity() {
  double worst_ratio = 0.0;
  int cases = 0;
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const Eigen::Index d = 2 + static_cast<Eigen::Index>(seed % 3);  // 2..4
    const Eigen::Index ns = 2 + static_cast<Eigen::Index>(seed % 3), nt = 8 - ns - (seed % 2);
    const auto xs = random_features(d, ns, 500 + seed);
    const auto xt = random_features(d, nt, 600 + seed, 1.5);
    const KernelSpec spec = seed % 2 ? KernelSpec::gaussian() : KernelSpec::linear();
    const auto ak = build_augmented(xs, xt, spec);
    SolverState state;
    state.p = random_matrix(ns + nt, d, 700 + seed);
    state.t = random_matrix(ns + nt, d, 800 + seed);
    for (double lambda : {0.0, 0.1, 1.0, 10.0}) {
      for (double kappa : {0.1, 1.0, 100.0}) {
        state.kappa = kappa;
        const Eigen::MatrixXd q = update_q(state, xs, ak, lambda);
        const Eigen::MatrixXd g = tsrg::testing::fd_gradient(q, state.p, state.t, xs.data(),
                                                             ak.k_s, ak.delta_k, lambda, kappa);
        worst_ratio = std::max(worst_ratio, g.cwiseAbs().maxCoeff() / (1e-4 * (1.0 + kappa)));
        ++cases;
      }
    }
  }
  return {worst_ratio < 1.0,
          fmt("worst max|grad| / (1e-4 (1+kappa)) = %.3e over %d cases, lambda in {0,0.1,1,10}",
              worst_ratio, cases)};
}

const std::vector<double> kLambdaGrid{0.1, 1.0, 10.0, 100.0, 1000.0};
const std::vector<double> kMuGrid{0.001, 0.01};

Outcome convergence() {
  int fixtures = 0, failures = 0, max_iters = 0;
  double worst_residual = 0.0;
  auto check = [&](const FeatureMatrix& xs, const FeatureMatrix& xt, const SolverConfig& cfg) {
    const FitResult r = fit(xs, xt, KernelSpec::linear(), cfg);
    const auto& last = r.trace.records.back();
    const bool ok = r.trace.converged && r.trace.iters_run <= 500 &&
                    last.primal_residual < 1e-7 &&
                    last.objective <= xs.data().squaredNorm();
    ++fixtures;
    failures += ok ? 0 : 1;
    max_iters = std::max(max_iters, r.trace.iters_run);
    worst_residual = std::max(worst_residual, last.primal_residual);
  };
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto pair = harness::synth_generate(harness::shifted_benchmark_spec(seed));
    for (double lambda : kLambdaGrid) {
      for (double mu : kMuGrid) check(pair.source.features, pair.target.features, solver_config(lambda, mu));
    }
  }
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    check(random_features(5, 10, 900 + seed), random_features(5, 10, 950 + seed, 2.0),
          solver_config(1.0, 1e-3));
  }
  return {failures == 0,
          fmt("%d/%d fixtures converged with final |P-Q| < 1e-7 and objective <= |X_s|^2; "
              "max iters %d, worst final residual %.2e",
              fixtures - failures, fixtures, max_iters, worst_residual)};
}

// Brute-force squared MMD over explicit kernel pairs.
double brute_mmd2(const FeatureMatrix& a, const FeatureMatrix& b, double sigma) {
  auto k = [&](const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) s += (x(i) - y(i)) * (x(i) - y(i));
    return std::exp(-s / (2.0 * sigma * sigma));
  };
  auto mean = [&](const FeatureMatrix& u, const FeatureMatrix& v) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < u.n(); ++i)
      for (Eigen::Index j = 0; j < v.n(); ++j) s += k(u.col(i), v.col(j));
    return s / static_cast<double>(u.n() * v.n());
  };
  return mean(a, a) + mean(b, b) - 2.0 * mean(a, b);
}

Outcome mmd_identities() {
  double self = 0.0, asym = 0.0, linear_gap = 0.0, brute = 0.0;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Eigen::Index na = 1 + static_cast<Eigen::Index>(seed % 10);
    const Eigen::Index nb = 1 + static_cast<Eigen::Index>((seed * 7) % 10);
    const auto a = random_features(3, na, 1000 + seed);
    const auto b = random_features(3, nb, 1100 + seed, 2.0);
    for (const auto& spec : {KernelSpec::linear(), KernelSpec::gaussian(1.0)}) {
      self = std::max(self, mmd(a, a, spec));
      asym = std::max(asym, std::abs(mmd(a, b, spec) - mmd(b, a, spec)));
    }
    const double gap = (a.data().rowwise().mean() - b.data().rowwise().mean()).norm();
    linear_gap = std::max(linear_gap, std::abs(mmd(a, b, KernelSpec::linear()) - gap));
    const double sigma = 0.5 + static_cast<double>(seed % 4);
    brute = std::max(brute, std::abs(mmd_squared(a, b, KernelSpec::gaussian(sigma)) -
                                     brute_mmd2(a, b, sigma)));
  }
  const bool ok = self <= 1e-8 && asym <= 1e-10 && linear_gap <= 1e-9 && brute <= 1e-10;
  return {ok, fmt("mmd(A,A) %.1e (<= 1e-8), asymmetry %.1e (<= 1e-10), linear vs mean gap "
                  "%.1e (<= 1e-9), Gaussian vs brute force %.1e (<= 1e-10)",
                  self, asym, linear_gap, brute)};
}

Outcome lemma_degenerate() {
  const auto x = random_features(4, 6, 1200);
  int nonzero = 0;
  for (const auto& spec : {KernelSpec::linear(), KernelSpec::gaussian()}) {
    const auto ak = build_augmented(x, x, spec);
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      if (fg_residual(random_matrix(12, 4, 1300 + seed, 5.0), ak) != 0.0) ++nonzero;
    }
  }
  return {nonzero == 0, fmt("%d of 100 random P (50 per kernel) gave a nonzero residual", nonzero)};
}

Outcome benchmark() {
  const auto start = Clock::now();
  constexpr int kSeeds = 20;
  const std::size_t cells = kLambdaGrid.size() * kMuGrid.size();
  std::vector<harness::GridResult> grids;
  for (int seed = 0; seed < kSeeds; ++seed) {
    const auto pair = harness::synth_generate(harness::shifted_benchmark_spec(seed));
    const auto domains = harness::make_domains(pair.source, pair.target, "source", "target");
    grids.push_back(harness::grid_search(domains, harness::RunSettings{}, kLambdaGrid, kMuGrid));
  }
  // One (lambda, mu) for the whole benchmark: the cell with the best mean
  // UAR over seeds, mean WAR breaking ties, earlier cell on a full tie.
  std::size_t best = 0;
  double best_uar = -1.0, best_war = -1.0;
  for (std::size_t c = 0; c < cells; ++c) {
    double uar = 0.0, war = 0.0;
    for (const auto& g : grids) {
      uar += g.rows[c].report.uar;
      war += g.rows[c].report.war;
    }
    if (uar > best_uar || (uar == best_uar && war > best_war)) {
      best = c;
      best_uar = uar;
      best_war = war;
    }
  }
  std::vector<double> gains, ratios;
  for (const auto& g : grids) {
    gains.push_back(g.rows[best].report.uar - g.baseline.uar);
    ratios.push_back(g.rows[best].mmd_after / g.mmd_before);
  }
  std::vector<double> sorted = gains;
  std::sort(sorted.begin(), sorted.end());
  const double median = 0.5 * (sorted[kSeeds / 2 - 1] + sorted[kSeeds / 2]);
  const double worst_ratio = *std::max_element(ratios.begin(), ratios.end());
  const int positive = static_cast<int>(std::count_if(gains.begin(), gains.end(),
                                                      [](double g) { return g > 0.0; }));
  // Reported only: each seed's own best cell instead of one shared cell.
  std::vector<double> own_gains;
  int own_ratio_ok = 0;
  for (const auto& g : grids) {
    const auto& own = g.rows[g.best_index];
    own_gains.push_back(own.report.uar - g.baseline.uar);
    own_ratio_ok += own.mmd_after <= 0.5 * g.mmd_before;
  }
  std::sort(own_gains.begin(), own_gains.end());
  const double own_median = 0.5 * (own_gains[kSeeds / 2 - 1] + own_gains[kSeeds / 2]);
  const double elapsed = seconds_since(start);
  const auto& row = grids.front().rows[best];
  return {median >= 0.10 && worst_ratio <= 0.5 && elapsed < 120.0,
          fmt("selected (lambda, mu) = (%g, %g); median UAR gain %+.4f (>= +0.10), "
              "gain > 0 on %d/20 seeds; worst mmd ratio %.3f (<= 0.5); %.1f s (< 120 s) "
              "[per-seed best cells, not gated: median gain %+.4f, ratio <= 0.5 on %d/20]",
              row.lambda, row.mu, median, positive, worst_ratio, elapsed, own_median,
              own_ratio_ok)};
}

Outcome metrics_cases() {
  auto report = [](const std::vector<std::vector<std::int64_t>>& c) {
    std::vector<int> truth, pred;
    for (std::size_t i = 0; i < c.size(); ++i)
      for (std::size_t j = 0; j < c.size(); ++j)
        for (std::int64_t n = 0; n < c[i][j]; ++n) {
          truth.push_back(static_cast<int>(i));
          pred.push_back(static_cast<int>(j));
        }
    return evaluate(truth, pred, static_cast<int>(c.size()));
  };
  const EvalReport a = report({{8, 2}, {3, 7}});
  const EvalReport b = report({{90, 10}, {5, 5}});
  const double e1 = std::max(std::abs(a.war - 15.0 / 20.0), std::abs(a.uar - 3.0 / 4.0));
  const double e2 = std::max(std::abs(b.war - 95.0 / 110.0), std::abs(b.uar - 7.0 / 10.0));
  return {e1 <= 1e-12 && e2 <= 1e-12 && b.war > b.uar,
          fmt("[[8,2],[3,7]] WAR %.6f UAR %.6f; [[90,10],[5,5]] WAR %.6f UAR %.6f; "
              "max error %.1e (<= 1e-12)",
              a.war, a.uar, b.war, b.uar, std::max(e1, e2))};
}

double count_interior_centers(int frames, int y0, int y1, int x0, int x1, int r) {
  double n = 0;
  for (int t = 0; t < frames; ++t)
    for (int y = y0; y < y1; ++y)
      for (int x = x0; x < x1; ++x)
        n += (t - r >= 0 && t + r < frames && y - r >= y0 && y + r < y1 && x - r >= x0 &&
              x + r < x1)
                 ? 1
                 : 0;
  return n;
}

Outcome lbptop_checks() {
  const lbptop::LbpTopParams params;
  const std::size_t length = lbptop::feature_length(params);

  int uniform = 0;
  for (std::uint32_t c = 0; c < 256; ++c) {
    int transitions = 0;
    for (int p = 0; p < 8; ++p) transitions += ((c >> p) & 1u) != ((c >> ((p + 1) % 8)) & 1u);
    uniform += transitions <= 2;
  }
  const int bins = lbptop::CodeMapping(8, true).num_bins();

  const Eigen::VectorXd flat = lbptop::extract(lbptop::VideoClip(8, 64, 64, 77.0), params);
  bool concentrated = true;
  const int ones_bin = lbptop::CodeMapping(8, true).bin(255);
  for (Eigen::Index h = 0; h < flat.size() / bins; ++h) {
    concentrated = concentrated && flat(h * bins + ones_bin) == 1.0 &&
                   flat.segment(h * bins, bins).sum() == 1.0;
  }

  lbptop::VideoClip clip(20, 64, 64, 0.0);
  std::mt19937_64 rng(1500);
  std::uniform_int_distribution<int> px(0, 255);
  for (double& v : clip.pixels) v = px(rng);
  lbptop::LbpTopParams raw = params;
  raw.normalize = false;
  const Eigen::VectorXd counts = lbptop::extract(clip, raw);
  bool counts_match = true;
  Eigen::Index cursor = 0;
  for (int g : params.grids) {
    for (int by = 0; by < g; ++by) {
      for (int bx = 0; bx < g; ++bx) {
        const double expected =
            count_interior_centers(clip.frames, by * 64 / g, (by + 1) * 64 / g, bx * 64 / g,
                                   (bx + 1) * 64 / g, params.radius);
        for (int plane = 0; plane < 3; ++plane, cursor += bins) {
          counts_match = counts_match && counts.segment(cursor, bins).sum() == expected;
        }
      }
    }
  }

  const auto start = Clock::now();
  const Eigen::VectorXd f = lbptop::extract(clip, params);
  const double elapsed = seconds_since(start);

  const bool ok = length == 15045 && f.size() == 15045 && uniform == 58 && bins == 59 &&
                  concentrated && counts_match && elapsed < 5.0;
  return {ok, fmt("length %zu (15045); %d uniform patterns, %d bins (59); constant clip "
                  "concentrated=%d; center counts match=%d; 20x64x64 extraction %.3f s (< 5 s)",
                  length, uniform, bins, concentrated, counts_match, elapsed)};
}

Outcome label_remap(const fs::path& work) {
  using namespace harness;
  const LabelMap map = casme2_label_map();
  auto mapped = [&](const std::string& l) { return apply_label_map({l}, map).labels; };
  const bool rules = mapped("Happiness") == std::vector<std::string>{"Positive"} &&
                     mapped("Disgust") == std::vector<std::string>{"Negative"} &&
                     mapped("Repression") == std::vector<std::string>{"Negative"} &&
                     mapped("Surprise") == std::vector<std::string>{"Surprise"};

  // Synthetic manifest carrying the remapped class sizes 91 / 32 / 25.
  const fs::path dir = work / "casme2_synthetic";
  fs::create_directories(dir);
  std::ofstream manifest(dir / "casme2.manifest");
  manifest << "# name: casme2-synthetic\npath,label,subject\n";
  const std::vector<std::pair<std::string, int>> raw = {
      {"Happiness", 32}, {"Surprise", 25}, {"Disgust", 63}, {"Repression", 28}, {"Others", 40}};
  int id = 0;
  for (const auto& [label, count] : raw) {
    for (int i = 0; i < count; ++i, ++id) {
      const std::string file = "f" + std::to_string(id) + ".csv";
      std::ofstream(dir / file) << id << ",0.5\n";
      manifest << file << "," << label << ",sub" << (id % 26) << "\n";
    }
  }
  manifest.close();

  auto validated = [&](const fs::path& path) {
    const Samples s = apply_label_map(ingest(read_manifest(path), Precomputed{}), map);
    std::map<std::string, std::size_t> counts;
    for (const auto& l : s.labels) ++counts[l];
    validate_counts(counts, casme2_expected_counts());
    return counts;
  };

  bool synthetic_ok = false;
  std::string synthetic_note;
  try {
    const auto counts = validated(dir / "casme2.manifest");
    synthetic_ok = true;
    synthetic_note = fmt("synthetic manifest -> Negative %zu, Positive %zu, Surprise %zu",
                         counts.at("Negative"), counts.at("Positive"), counts.at("Surprise"));
  } catch (const Error& e) {
    synthetic_note = std::string("synthetic manifest failed: ") + e.what();
  }

  bool real_ok = true;
  std::string real_note = "real manifest not supplied (set TSRG_CASME2_MANIFEST)";
  if (const char* real = std::getenv("TSRG_CASME2_MANIFEST"); real && *real) {
    try {
      validated(real);
      real_note = std::string("real manifest ") + real + " validated";
    } catch (const Error& e) {
      real_ok = false;
      real_note = std::string("real manifest failed: ") + e.what();
    }
  }
  return {rules && synthetic_ok && real_ok,
          fmt("rules=%d; %s; %s", rules, synthetic_note.c_str(), real_note.c_str())};
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

int run_cli(const std::string& cli, const std::string& args, const fs::path& log) {
  const std::string cmd = "\"" + cli + "\" " + args + " > \"" + log.string() + "\" 2>&1";
  return std::system(cmd.c_str());
}

Outcome determinism(const std::string& cli, const fs::path& work) {
  if (cli.empty()) return {false, "no --cli binary given"};
  std::vector<std::string> notes;
  bool ok = true;
  struct Case {
    std::string name, args;
    std::vector<std::string> files;
  };
  const std::vector<Case> cases = {
      {"run", "run --synthetic --seed 17 --lambda 1 --mu 0.001",
       {"reports.jsonl", "trace.csv", "model.tsrg"}},
      {"grid", "grid --synthetic --seed 17 --lambda-grid 0.1,10 --mu-grid 0.001,0.01 --threads 4",
       {"grid.jsonl"}},
  };
  for (const auto& c : cases) {
    std::string first[3];
    for (int rep = 0; rep < 2; ++rep) {
      const fs::path out = work / (c.name + "_" + std::to_string(rep));
      fs::remove_all(out);
      const int status = run_cli(cli, c.args + " --out-dir \"" + out.string() + "\"",
                                 work / (c.name + "_" + std::to_string(rep) + ".log"));
      if (status != 0) {
        ok = false;
        notes.push_back(c.name + " exited with status " + std::to_string(status));
        continue;
      }
      for (std::size_t f = 0; f < c.files.size(); ++f) {
        const std::string bytes = read_file(out / c.files[f]);
        if (bytes.empty()) {
          ok = false;
          notes.push_back(c.name + " wrote no " + c.files[f]);
        }
        if (rep == 0) {
          first[f] = bytes;
        } else if (bytes != first[f]) {
          ok = false;
          notes.push_back(c.name + " " + c.files[f] + " differs between invocations");
        }
      }
    }
  }
  if (ok) notes.push_back("run (reports.jsonl, trace.csv, model.tsrg) and grid (grid.jsonl) "
                          "byte-identical across two invocations");
  std::string joined;
  for (const auto& n : notes) joined += (joined.empty() ? "" : "; ") + n;
  return {ok, joined};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance suite"};
  std::string cli;
  std::string work = (fs::temp_directory_path() / "tsrg_acceptance").string();
  app.add_option("--cli", cli, "Path to the tsrg executable");
  app.add_option("--work-dir", work, "Scratch directory");
  CLI11_PARSE(app, argc, argv);
  fs::create_directories(work);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"source self-reconstruction", self_reconstruction},
      {"least-squares oracle equivalence", least_squares_oracle},
      {"proximal-operator oracle", proximal_oracle},
      {"Q-update stationarity", q_stationarity},
      {"convergence", convergence},
      {"MMD identities", mmd_identities},
      {"zero mean-difference gives zero residual", lemma_degenerate},
      {"synthetic domain-shift benchmark", benchmark},
      {"metrics", metrics_cases},
      {"LBP-TOP", lbptop_checks},
      {"label remap", [&] { return label_remap(work); }},
      {"determinism", [&] { return determinism(cli, work); }},
  };

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::cout << (o.pass ? "PASS" : "FAIL") << " [" << (i + 1) << "] " << criteria[i].first
              << ": " << o.detail << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed"
            << std::endl;
  return failed == 0 ? 0 : 1;
}
