#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "tsrg/harness/dataset_io.hpp"

namespace tsrg::harness {

/// Per-class isotropic Gaussians; target samples come from the same class
/// distributions and are then mapped through x -> A x + b.
struct SynthSpec {
  int classes = 3;
  int dim = 20;
  std::vector<int> source_counts;  // per class
  std::vector<int> target_counts;  // per class
  Eigen::MatrixXd centers;         // dim x classes
  double scale = 1.0;              // per-coordinate standard deviation
  Eigen::MatrixXd shift_matrix;    // A, dim x dim
  Eigen::VectorXd shift_offset;    // b, dim
  std::uint64_t seed = 0;

  /// Throws SpecError (singular A, counts < 2, shape mismatches).
  void validate() const;
};

/// The domain-shift benchmark: 3 classes in 20-D around a common offset of
/// 10 per coordinate, class c displaced by `separation` along axis c, sigma 1,
/// 20 samples per class per domain, target translated by shift*sigma along
/// axes 0 and 1.
SynthSpec shifted_benchmark_spec(std::uint64_t seed, double shift = 3.0,
                                 double separation = 3.0);

struct SynthPair {
  Samples source;
  Samples target;
};

SynthPair synth_generate(const SynthSpec& spec);

}  // namespace tsrg::harness
