#pragma once

#include <vector>

#include <Eigen/Dense>

namespace tsrg {

/// Column-per-sample feature matrix (d rows, n columns). Construction rejects
/// empty shapes and non-finite entries, so every FeatureMatrix in flight is
/// valid input for the kernels and the solver.
class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  explicit FeatureMatrix(Eigen::MatrixXd data);

  Eigen::Index d() const { return data_.rows(); }
  Eigen::Index n() const { return data_.cols(); }
  bool empty() const { return data_.size() == 0; }

  const Eigen::MatrixXd& data() const { return data_; }
  auto col(Eigen::Index i) const { return data_.col(i); }

  /// Columns [this, other] side by side.
  FeatureMatrix concat(const FeatureMatrix& other) const;
  /// Columns selected by index, in the given order.
  FeatureMatrix select(const std::vector<Eigen::Index>& columns) const;

  bool operator==(const FeatureMatrix& other) const;

 private:
  Eigen::MatrixXd data_;
};

/// Throws NonFiniteError if any entry is NaN or infinite.
void require_finite(const Eigen::MatrixXd& m, const char* what);

}  // namespace tsrg
