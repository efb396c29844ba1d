#pragma once

#include <optional>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "tsrg/feature_matrix.hpp"

namespace tsrg {

enum class KernelKind { Linear, Gaussian };

/// Kernel choice. Gaussian is exp(-|x-y|^2 / (2 sigma^2)); an unset bandwidth
/// is resolved by the median heuristic over the pooled sample the first time
/// the spec meets data (see resolve_bandwidth).
struct KernelSpec {
  KernelKind kind = KernelKind::Linear;
  std::optional<double> bandwidth;

  static KernelSpec linear() { return {KernelKind::Linear, std::nullopt}; }
  static KernelSpec gaussian(std::optional<double> sigma = std::nullopt) {
    return {KernelKind::Gaussian, sigma};
  }

  /// Throws SpecError on a non-positive or non-finite Gaussian bandwidth.
  void validate() const;
  bool resolved() const {
    return kind == KernelKind::Linear || bandwidth.has_value();
  }

  bool operator==(const KernelSpec&) const = default;
};

std::string to_string(KernelKind kind);
KernelKind parse_kernel_kind(std::string_view name);

/// Median of all pairwise Euclidean distances between the columns of
/// `pooled`. Needs at least two columns; a zero median (all points equal)
/// falls back to 1.
double median_pairwise_distance(const Eigen::MatrixXd& pooled);

/// Returns `spec` with a concrete bandwidth filled in from `pooled` if needed.
KernelSpec resolve_bandwidth(const KernelSpec& spec,
                             const Eigen::MatrixXd& pooled);

double kernel_eval(const Eigen::Ref<const Eigen::VectorXd>& x,
                   const Eigen::Ref<const Eigen::VectorXd>& y,
                   const KernelSpec& spec);

/// a.n x b.n matrix of kernel values between columns. `spec` must be resolved.
Eigen::MatrixXd gram_matrix(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                            const KernelSpec& spec);
Eigen::MatrixXd gram_matrix(const FeatureMatrix& a, const FeatureMatrix& b,
                            const KernelSpec& spec);

/// Gram blocks over the pooled anchors [X_s, X_t]:
///   k_s = [K_ss; K_ts]   (n x n_s)
///   k_t = [K_st; K_tt]   (n x n_t)
///   delta_k = k_s 1/n_s - k_t 1/n_t
struct AugmentedKernels {
  Eigen::MatrixXd k_s;
  Eigen::MatrixXd k_t;
  Eigen::VectorXd delta_k;
  Eigen::Index n_s = 0;
  Eigen::Index n_t = 0;
  KernelSpec kernel;  // resolved

  Eigen::Index n() const { return n_s + n_t; }
  /// Full pooled Gram [k_s, k_t].
  Eigen::MatrixXd full_gram() const;
};

AugmentedKernels build_augmented(const FeatureMatrix& x_s,
                                 const FeatureMatrix& x_t,
                                 const KernelSpec& spec);

/// Squared empirical MMD, m_ss + m_tt - 2 m_st, clamped at zero.
double mmd_squared(const FeatureMatrix& x_s, const FeatureMatrix& x_t,
                   const KernelSpec& spec);
/// Empirical MMD (the RKHS norm of the mean-embedding difference).
double mmd(const FeatureMatrix& x_s, const FeatureMatrix& x_t,
           const KernelSpec& spec);

}  // namespace tsrg
