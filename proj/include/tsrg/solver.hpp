#pragma once

#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "tsrg/feature_matrix.hpp"
#include "tsrg/kernels.hpp"

namespace tsrg {

/// Hyperparameters of the re-generator objective and of the inexact
/// augmented Lagrangian loop that minimizes it.
struct SolverConfig {
  double lambda = 1.0;     // weight of the mean-discrepancy term
  double mu = 1e-3;        // weight of the entrywise L1 penalty on P
  double kappa0 = 0.1;     // initial penalty
  double rho = 1.1;        // penalty growth factor
  double kappa_max = 1e7;  // penalty cap
  double epsilon = 1e-7;   // stopping tolerance
  int max_iters = 500;

  /// Throws SpecError when any field is out of range.
  void validate() const;
  bool operator==(const SolverConfig&) const = default;
};

/// Iterate of the splitting P = Q with multiplier T. All three matrices are
/// (n_s + n_t) x d.
struct SolverState {
  Eigen::MatrixXd p;
  Eigen::MatrixXd q;
  Eigen::MatrixXd t;
  double kappa = 0.0;
  int iter = 0;

  static SolverState zeros(Eigen::Index rows, Eigen::Index cols, double kappa);
};

/// Learned re-generator G(x) = P^T k(anchors, x). Self-contained: applying it
/// needs nothing beyond this record.
struct TsrgModel {
  Eigen::MatrixXd p;      // (n_s + n_t) x d
  FeatureMatrix anchors;  // [X_s, X_t], d x (n_s + n_t)
  KernelSpec kernel;      // resolved
  Eigen::Index n_s = 0;
  Eigen::Index n_t = 0;
  SolverConfig config;

  Eigen::Index d() const { return anchors.d(); }
  bool operator==(const TsrgModel& other) const;
};

struct TraceRecord {
  int iter = 0;
  double objective = 0.0;
  double reconstruction = 0.0;
  double fg = 0.0;
  double l1 = 0.0;
  double primal_residual = 0.0;  // max |P - Q|
  double step = 0.0;             // max |P_k - P_{k-1}|
  double kappa = 0.0;            // penalty used for this iteration
};

struct SolverTrace {
  std::vector<TraceRecord> records;
  bool converged = false;
  int iters_run = 0;
};

struct ObjectiveTerms {
  double reconstruction = 0.0;  // |X_s - P^T K_s|_F^2
  double fg = 0.0;              // |P^T delta_k|^2
  double l1 = 0.0;              // sum |P_ij|
  double total = 0.0;           // reconstruction + lambda fg + mu l1
};

ObjectiveTerms objective_terms(const Eigen::MatrixXd& p, const FeatureMatrix& x_s,
                               const AugmentedKernels& ak, double lambda,
                               double mu);
double objective(const Eigen::MatrixXd& p, const FeatureMatrix& x_s,
                 const AugmentedKernels& ak, double lambda, double mu);

/// Closed-form Q step. Holds the kappa-independent part of the normal
/// equations,
///   A = K_s K_s^T + lambda dk dk^T,   B = K_s X_s^T,
/// so each solve only re-factorizes A + (kappa/2) I.
class QStep {
 public:
  QStep(const FeatureMatrix& x_s, const AugmentedKernels& ak, double lambda);

  /// argmin_Q of the smooth part of the augmented Lagrangian:
  ///   (A + kappa/2 I)^{-1} (B + (kappa P + T) / 2).
  /// Throws NumericalError if Cholesky fails after jitter escalation.
  Eigen::MatrixXd solve(const Eigen::MatrixXd& p, const Eigen::MatrixXd& t,
                        double kappa) const;

  const Eigen::MatrixXd& system() const { return a_; }
  const Eigen::MatrixXd& rhs() const { return b_; }

 private:
  Eigen::MatrixXd a_;
  Eigen::MatrixXd b_;
  double jitter_base_ = 0.0;
};

Eigen::MatrixXd update_q(const SolverState& state, const FeatureMatrix& x_s,
                         const AugmentedKernels& ak, double lambda);

/// Soft-threshold sign(v) max(|v| - tau, 0).
double shrink(double v, double tau);

/// P = shrink(Q - T/kappa, mu/kappa), entrywise.
Eigen::MatrixXd update_p(const Eigen::MatrixXd& q, const Eigen::MatrixXd& t,
                         double kappa, double mu);

struct MultiplierUpdate {
  Eigen::MatrixXd t;
  double kappa = 0.0;
};

/// T + kappa (P - Q) and min(rho kappa, kappa_max).
MultiplierUpdate update_multiplier(const SolverState& state, double rho,
                                   double kappa_max);

struct FitResult {
  TsrgModel model;
  SolverTrace trace;
};

/// Runs the IALM loop from P = Q = T = 0. Stops once both max|P - Q| and the
/// change in P over one iteration drop below epsilon, or after max_iters.
FitResult fit(const FeatureMatrix& x_s, const FeatureMatrix& x_t,
              const KernelSpec& spec, const SolverConfig& config);

/// Same, reusing precomputed kernel blocks (built from the same x_s, x_t).
FitResult fit(const FeatureMatrix& x_s, const FeatureMatrix& x_t,
              const AugmentedKernels& ak, const SolverConfig& config);

/// G(X) = P^T k(anchors, X), a d x X.n matrix.
FeatureMatrix regenerate(const TsrgModel& model, const FeatureMatrix& x);

/// |P^T delta_k|^2: squared distance between the means of the regenerated
/// source and target columns.
double fg_residual(const TsrgModel& model, const AugmentedKernels& ak);
double fg_residual(const Eigen::MatrixXd& p, const AugmentedKernels& ak);

}  // namespace tsrg
