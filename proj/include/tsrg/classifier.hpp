#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tsrg/feature_matrix.hpp"

namespace tsrg {

/// Samples with integer class ids 0..k-1 and the names those ids stand for.
struct LabeledDataset {
  FeatureMatrix features;
  std::vector<int> labels;
  std::vector<std::string> class_names;

  std::size_t num_classes() const { return class_names.size(); }
  /// Samples per class id.
  std::vector<std::size_t> class_counts() const;
  /// Shape and range checks; with `require_all_classes`, every class id must
  /// occur at least once (EmptyClassError otherwise).
  void validate(bool require_all_classes) const;

  bool operator==(const LabeledDataset&) const = default;
};

struct LinearClassifier {
  Eigen::MatrixXd weights;  // k x d
  Eigen::VectorXd biases;   // k
  double penalty_c = 1.0;
  std::vector<std::string> class_names;

  Eigen::Index num_classes() const { return weights.rows(); }
  Eigen::Index dim() const { return weights.cols(); }
  bool operator==(const LinearClassifier& other) const;
};

struct TrainOptions {
  double tolerance = 1e-4;  // relative duality gap per binary problem
  int max_epochs = 1000;
};

/// One-vs-rest L1-loss linear SVMs solved by dual coordinate descent, sweeping
/// samples in storage order. The bias is a regularized weight on a constant
/// feature of value 1.
LinearClassifier train(const LabeledDataset& data, double penalty_c,
                       const TrainOptions& options = {});

/// k x n matrix of w_c . x + b_c.
Eigen::MatrixXd decision_scores(const LinearClassifier& model, const FeatureMatrix& x);

/// Argmax class per column; ties go to the lowest class id.
std::vector<int> predict(const LinearClassifier& model, const FeatureMatrix& x);

void save_classifier(const std::filesystem::path& path, const LinearClassifier& model);
LinearClassifier load_classifier(const std::filesystem::path& path);

}  // namespace tsrg
