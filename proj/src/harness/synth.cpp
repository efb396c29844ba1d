#include "tsrg/harness/synth.hpp"

#include <random>
#include <string>

#include <Eigen/LU>

#include "tsrg/errors.hpp"

namespace tsrg::harness {

void SynthSpec::validate() const {
  if (classes < 1 || dim < 1) throw SpecError("synth: classes and dim must be positive");
  if (static_cast<int>(source_counts.size()) != classes ||
      static_cast<int>(target_counts.size()) != classes) {
    throw SpecError("synth: need one source and one target count per class");
  }
  for (int c = 0; c < classes; ++c) {
    if (source_counts[c] < 2 || target_counts[c] < 2) {
      throw SpecError("synth: every class needs at least 2 samples per domain");
    }
  }
  if (centers.rows() != dim || centers.cols() != classes) {
    throw SpecError("synth: centers must be dim x classes");
  }
  if (!(scale > 0.0)) throw SpecError("synth: scale must be positive");
  if (shift_matrix.rows() != dim || shift_matrix.cols() != dim || shift_offset.size() != dim) {
    throw SpecError("synth: shift map must be dim x dim plus a dim offset");
  }
  if (!Eigen::FullPivLU<Eigen::MatrixXd>(shift_matrix).isInvertible()) {
    throw SpecError("synth: shift matrix A is singular");
  }
}

SynthSpec shifted_benchmark_spec(std::uint64_t seed, double shift, double separation) {
  SynthSpec spec;
  spec.classes = 3;
  spec.dim = 20;
  spec.source_counts = {20, 20, 20};
  spec.target_counts = {20, 20, 20};
  spec.centers = Eigen::MatrixXd::Constant(spec.dim, spec.classes, 10.0);
  for (int c = 0; c < spec.classes; ++c) spec.centers(c, c) += separation;
  spec.scale = 1.0;
  spec.shift_matrix = Eigen::MatrixXd::Identity(spec.dim, spec.dim);
  spec.shift_offset = Eigen::VectorXd::Zero(spec.dim);
  spec.shift_offset(0) = shift * spec.scale;
  spec.shift_offset(1) = shift * spec.scale;
  spec.seed = seed;
  return spec;
}

namespace {

Samples draw(const SynthSpec& spec, const std::vector<int>& counts, std::mt19937_64& rng) {
  int total = 0;
  for (int c : counts) total += c;
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd x(spec.dim, total);
  std::vector<std::string> labels;
  labels.reserve(static_cast<std::size_t>(total));
  Eigen::Index col = 0;
  for (int c = 0; c < spec.classes; ++c) {
    for (int i = 0; i < counts[c]; ++i, ++col) {
      for (int r = 0; r < spec.dim; ++r) x(r, col) = spec.centers(r, c) + spec.scale * normal(rng);
      labels.push_back("c" + std::to_string(c));
    }
  }
  return {FeatureMatrix(std::move(x)), std::move(labels)};
}

}  // namespace

SynthPair synth_generate(const SynthSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  Samples source = draw(spec, spec.source_counts, rng);
  Samples target = draw(spec, spec.target_counts, rng);
  Eigen::MatrixXd shifted = spec.shift_matrix * target.features.data();
  shifted.colwise() += spec.shift_offset;
  target.features = FeatureMatrix(std::move(shifted));
  return {std::move(source), std::move(target)};
}

}  // namespace tsrg::harness
