#include "tsrg/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "tsrg/errors.hpp"

namespace tsrg {

void KernelSpec::validate() const {
  if (kind == KernelKind::Gaussian && bandwidth &&
      !(std::isfinite(*bandwidth) && *bandwidth > 0.0)) {
    throw SpecError("Gaussian bandwidth must be positive and finite");
  }
}

std::string to_string(KernelKind kind) {
  return kind == KernelKind::Linear ? "linear" : "gaussian";
}

KernelKind parse_kernel_kind(std::string_view name) {
  if (name == "linear") return KernelKind::Linear;
  if (name == "gaussian" || name == "rbf") return KernelKind::Gaussian;
  throw ConfigError("unknown kernel '" + std::string(name) +
                    "' (expected linear or gaussian)");
}

double median_pairwise_distance(const Eigen::MatrixXd& pooled) {
  const Eigen::Index n = pooled.cols();
  if (n < 2) {
    throw DimensionError("median heuristic needs at least two samples");
  }
  std::vector<double> dists;
  dists.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      dists.push_back((pooled.col(i) - pooled.col(j)).norm());
    }
  }
  const auto mid = dists.begin() + static_cast<std::ptrdiff_t>(dists.size() / 2);
  std::nth_element(dists.begin(), mid, dists.end());
  double median = *mid;
  if (dists.size() % 2 == 0) {
    const double lower = *std::max_element(dists.begin(), mid);
    median = 0.5 * (median + lower);
  }
  return median > 0.0 ? median : 1.0;
}

KernelSpec resolve_bandwidth(const KernelSpec& spec,
                             const Eigen::MatrixXd& pooled) {
  spec.validate();
  if (spec.resolved()) return spec;
  return KernelSpec::gaussian(median_pairwise_distance(pooled));
}

namespace {

void require_resolved(const KernelSpec& spec) {
  spec.validate();
  if (!spec.resolved()) {
    throw SpecError("Gaussian kernel used before its bandwidth was resolved");
  }
}

}  // namespace

double kernel_eval(const Eigen::Ref<const Eigen::VectorXd>& x,
                   const Eigen::Ref<const Eigen::VectorXd>& y,
                   const KernelSpec& spec) {
  if (x.size() != y.size()) {
    throw DimensionError("kernel_eval: dimension mismatch " +
                         std::to_string(x.size()) + " vs " +
                         std::to_string(y.size()));
  }
  require_resolved(spec);
  switch (spec.kind) {
    case KernelKind::Linear:
      return x.dot(y);
    case KernelKind::Gaussian: {
      const double sigma = *spec.bandwidth;
      return std::exp(-(x - y).squaredNorm() / (2.0 * sigma * sigma));
    }
  }
  return 0.0;
}

Eigen::MatrixXd gram_matrix(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                            const KernelSpec& spec) {
  if (a.rows() != b.rows()) {
    throw DimensionError("gram_matrix: dimension mismatch " +
                         std::to_string(a.rows()) + " vs " +
                         std::to_string(b.rows()));
  }
  require_resolved(spec);
  if (spec.kind == KernelKind::Linear) {
    return a.transpose() * b;
  }
  const double denom = 2.0 * *spec.bandwidth * *spec.bandwidth;
  Eigen::MatrixXd k(a.cols(), b.cols());
  for (Eigen::Index j = 0; j < b.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.cols(); ++i) {
      k(i, j) = std::exp(-(a.col(i) - b.col(j)).squaredNorm() / denom);
    }
  }
  return k;
}

Eigen::MatrixXd gram_matrix(const FeatureMatrix& a, const FeatureMatrix& b,
                            const KernelSpec& spec) {
  return gram_matrix(a.data(), b.data(), spec);
}

Eigen::MatrixXd AugmentedKernels::full_gram() const {
  Eigen::MatrixXd full(n(), n());
  full << k_s, k_t;
  return full;
}

AugmentedKernels build_augmented(const FeatureMatrix& x_s,
                                 const FeatureMatrix& x_t,
                                 const KernelSpec& spec) {
  if (x_s.d() != x_t.d()) {
    throw DimensionError("build_augmented: source d=" + std::to_string(x_s.d()) +
                         " but target d=" + std::to_string(x_t.d()));
  }
  const FeatureMatrix pooled = x_s.concat(x_t);
  AugmentedKernels ak;
  ak.kernel = resolve_bandwidth(spec, pooled.data());
  ak.n_s = x_s.n();
  ak.n_t = x_t.n();

  // One pooled Gram; K_ts is K_st^T so slicing avoids the duplicate work.
  const Eigen::MatrixXd full = gram_matrix(pooled.data(), pooled.data(), ak.kernel);
  ak.k_s = full.leftCols(ak.n_s);
  ak.k_t = full.rightCols(ak.n_t);
  ak.delta_k = ak.k_s.rowwise().mean() - ak.k_t.rowwise().mean();
  return ak;
}

double mmd_squared(const FeatureMatrix& x_s, const FeatureMatrix& x_t,
                   const KernelSpec& spec) {
  if (x_s.d() != x_t.d()) {
    throw DimensionError("mmd: dimension mismatch " + std::to_string(x_s.d()) +
                         " vs " + std::to_string(x_t.d()));
  }
  const KernelSpec k = resolve_bandwidth(spec, x_s.concat(x_t).data());
  const double m_ss = gram_matrix(x_s, x_s, k).mean();
  const double m_tt = gram_matrix(x_t, x_t, k).mean();
  const double m_st = gram_matrix(x_s, x_t, k).mean();
  return std::max(0.0, m_ss + m_tt - 2.0 * m_st);
}

double mmd(const FeatureMatrix& x_s, const FeatureMatrix& x_t,
           const KernelSpec& spec) {
  return std::sqrt(mmd_squared(x_s, x_t, spec));
}

}  // namespace tsrg
