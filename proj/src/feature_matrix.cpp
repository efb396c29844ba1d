#include "tsrg/feature_matrix.hpp"

#include <string>

#include "tsrg/errors.hpp"

namespace tsrg {

void require_finite(const Eigen::MatrixXd& m, const char* what) {
  if (!m.allFinite()) {
    throw NonFiniteError(std::string(what) + " contains NaN or Inf entries");
  }
}

FeatureMatrix::FeatureMatrix(Eigen::MatrixXd data) : data_(std::move(data)) {
  if (data_.rows() == 0 || data_.cols() == 0) {
    throw DimensionError("FeatureMatrix needs d >= 1 and n >= 1, got " +
                         std::to_string(data_.rows()) + "x" +
                         std::to_string(data_.cols()));
  }
  require_finite(data_, "FeatureMatrix");
}

FeatureMatrix FeatureMatrix::concat(const FeatureMatrix& other) const {
  if (other.d() != d()) {
    throw DimensionError("concat: dimension mismatch " + std::to_string(d()) +
                         " vs " + std::to_string(other.d()));
  }
  Eigen::MatrixXd out(d(), n() + other.n());
  out << data_, other.data_;
  return FeatureMatrix(std::move(out));
}

FeatureMatrix FeatureMatrix::select(
    const std::vector<Eigen::Index>& columns) const {
  Eigen::MatrixXd out(d(), static_cast<Eigen::Index>(columns.size()));
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (columns[j] < 0 || columns[j] >= n()) {
      throw DimensionError("select: column index out of range");
    }
    out.col(static_cast<Eigen::Index>(j)) = data_.col(columns[j]);
  }
  return FeatureMatrix(std::move(out));
}

bool FeatureMatrix::operator==(const FeatureMatrix& other) const {
  return d() == other.d() && n() == other.n() && data_ == other.data_;
}

}  // namespace tsrg
