#include "tsrg/solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tsrg/errors.hpp"

namespace tsrg {

void SolverConfig::validate() const {
  auto fail = [](const std::string& what) { throw SpecError("SolverConfig: " + what); };
  if (!(std::isfinite(lambda) && lambda >= 0.0)) fail("lambda must be >= 0");
  if (!(std::isfinite(mu) && mu >= 0.0)) fail("mu must be >= 0");
  if (!(std::isfinite(kappa0) && kappa0 > 0.0)) fail("kappa0 must be > 0");
  if (!(std::isfinite(rho) && rho > 1.0)) fail("rho must be > 1");
  if (!(std::isfinite(kappa_max) && kappa_max > 0.0)) fail("kappa_max must be > 0");
  if (kappa0 > kappa_max) fail("kappa0 must not exceed kappa_max");
  if (!(std::isfinite(epsilon) && epsilon > 0.0)) fail("epsilon must be > 0");
  if (max_iters < 1) fail("max_iters must be positive");
}

SolverState SolverState::zeros(Eigen::Index rows, Eigen::Index cols, double kappa) {
  SolverState s;
  s.p = Eigen::MatrixXd::Zero(rows, cols);
  s.q = Eigen::MatrixXd::Zero(rows, cols);
  s.t = Eigen::MatrixXd::Zero(rows, cols);
  s.kappa = kappa;
  return s;
}

bool TsrgModel::operator==(const TsrgModel& other) const {
  return p.rows() == other.p.rows() && p.cols() == other.p.cols() &&
         p == other.p && anchors == other.anchors && kernel == other.kernel &&
         n_s == other.n_s && n_t == other.n_t && config == other.config;
}

namespace {

void require_shape(const Eigen::MatrixXd& m, Eigen::Index rows, Eigen::Index cols,
                   const char* what) {
  if (m.rows() != rows || m.cols() != cols) {
    throw DimensionError(std::string(what) + ": expected " + std::to_string(rows) +
                         "x" + std::to_string(cols) + ", got " +
                         std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

void require_consistent(const FeatureMatrix& x_s, const AugmentedKernels& ak) {
  if (ak.n_s != x_s.n() || ak.k_s.cols() != x_s.n() || ak.k_s.rows() != ak.n()) {
    throw DimensionError("augmented kernels do not match the source samples");
  }
}

}  // namespace

ObjectiveTerms objective_terms(const Eigen::MatrixXd& p, const FeatureMatrix& x_s,
                               const AugmentedKernels& ak, double lambda,
                               double mu) {
  require_consistent(x_s, ak);
  require_shape(p, ak.n(), x_s.d(), "objective: P");
  ObjectiveTerms terms;
  terms.reconstruction = (x_s.data() - p.transpose() * ak.k_s).squaredNorm();
  terms.fg = (p.transpose() * ak.delta_k).squaredNorm();
  terms.l1 = p.cwiseAbs().sum();
  terms.total = terms.reconstruction + lambda * terms.fg + mu * terms.l1;
  return terms;
}

double objective(const Eigen::MatrixXd& p, const FeatureMatrix& x_s,
                 const AugmentedKernels& ak, double lambda, double mu) {
  return objective_terms(p, x_s, ak, lambda, mu).total;
}

QStep::QStep(const FeatureMatrix& x_s, const AugmentedKernels& ak, double lambda) {
  require_consistent(x_s, ak);
  a_ = ak.k_s * ak.k_s.transpose();
  a_.noalias() += lambda * ak.delta_k * ak.delta_k.transpose();
  b_ = ak.k_s * x_s.data().transpose();
  const double trace = a_.trace();
  jitter_base_ = 1e-10 * (trace > 0.0 ? trace / static_cast<double>(ak.n()) : 1.0);
}

Eigen::MatrixXd QStep::solve(const Eigen::MatrixXd& p, const Eigen::MatrixXd& t,
                             double kappa) const {
  require_shape(p, b_.rows(), b_.cols(), "update_q: P");
  require_shape(t, b_.rows(), b_.cols(), "update_q: T");
  if (!(kappa > 0.0)) throw SpecError("update_q: kappa must be positive");

  const Eigen::MatrixXd rhs = b_ + 0.5 * (kappa * p + t);
  Eigen::MatrixXd lhs = a_;
  lhs.diagonal().array() += 0.5 * kappa;

  Eigen::LLT<Eigen::MatrixXd> llt(lhs);
  double jitter = jitter_base_;
  for (int attempt = 0; llt.info() != Eigen::Success; ++attempt) {
    if (attempt == 4) {
      throw NumericalError("update_q: Cholesky failed after jitter escalation");
    }
    Eigen::MatrixXd shifted = lhs;
    shifted.diagonal().array() += jitter;
    llt.compute(shifted);
    jitter *= 10.0;
  }
  return llt.solve(rhs);
}

Eigen::MatrixXd update_q(const SolverState& state, const FeatureMatrix& x_s,
                         const AugmentedKernels& ak, double lambda) {
  return QStep(x_s, ak, lambda).solve(state.p, state.t, state.kappa);
}

double shrink(double v, double tau) {
  if (v > tau) return v - tau;
  if (v < -tau) return v + tau;
  return 0.0;
}

Eigen::MatrixXd update_p(const Eigen::MatrixXd& q, const Eigen::MatrixXd& t,
                         double kappa, double mu) {
  require_shape(t, q.rows(), q.cols(), "update_p: T");
  if (!(kappa > 0.0)) throw SpecError("update_p: kappa must be positive");
  if (!(mu >= 0.0)) throw SpecError("update_p: mu must be non-negative");
  const double tau = mu / kappa;
  Eigen::MatrixXd p(q.rows(), q.cols());
  for (Eigen::Index j = 0; j < q.cols(); ++j) {
    for (Eigen::Index i = 0; i < q.rows(); ++i) {
      p(i, j) = shrink(q(i, j) - t(i, j) / kappa, tau);
    }
  }
  return p;
}

MultiplierUpdate update_multiplier(const SolverState& state, double rho,
                                   double kappa_max) {
  require_shape(state.q, state.p.rows(), state.p.cols(), "update_multiplier: Q");
  require_shape(state.t, state.p.rows(), state.p.cols(), "update_multiplier: T");
  if (!(rho > 1.0)) throw SpecError("update_multiplier: rho must exceed 1");
  return {state.t + state.kappa * (state.p - state.q),
          std::min(rho * state.kappa, kappa_max)};
}

FitResult fit(const FeatureMatrix& x_s, const FeatureMatrix& x_t,
              const KernelSpec& spec, const SolverConfig& config) {
  config.validate();
  return fit(x_s, x_t, build_augmented(x_s, x_t, spec), config);
}

FitResult fit(const FeatureMatrix& x_s, const FeatureMatrix& x_t,
              const AugmentedKernels& ak, const SolverConfig& config) {
  config.validate();
  if (x_s.d() != x_t.d()) {
    throw DimensionError("fit: source d=" + std::to_string(x_s.d()) +
                         " but target d=" + std::to_string(x_t.d()));
  }
  if (ak.n_t != x_t.n()) {
    throw DimensionError("fit: augmented kernels do not match the target samples");
  }

  const QStep q_step(x_s, ak, config.lambda);
  SolverState state = SolverState::zeros(ak.n(), x_s.d(), config.kappa0);
  SolverTrace trace;
  trace.records.reserve(static_cast<std::size_t>(config.max_iters));

  for (int it = 1; it <= config.max_iters; ++it) {
    const double kappa = state.kappa;
    state.q = q_step.solve(state.p, state.t, kappa);
    Eigen::MatrixXd p_next = update_p(state.q, state.t, kappa, config.mu);
    const double step = (p_next - state.p).cwiseAbs().maxCoeff();
    state.p = std::move(p_next);
    const double residual = (state.p - state.q).cwiseAbs().maxCoeff();

    auto [t_next, kappa_next] = update_multiplier(state, config.rho, config.kappa_max);
    state.t = std::move(t_next);
    state.kappa = kappa_next;
    state.iter = it;

    if (!state.p.allFinite() || !state.q.allFinite() || !state.t.allFinite()) {
      throw NonFiniteError("fit: non-finite iterate at iteration " + std::to_string(it));
    }

    const ObjectiveTerms terms =
        objective_terms(state.p, x_s, ak, config.lambda, config.mu);
    trace.records.push_back({it, terms.total, terms.reconstruction, terms.fg,
                             terms.l1, residual, step, kappa});
    trace.iters_run = it;

    if (residual < config.epsilon && step < config.epsilon) {
      trace.converged = true;
      break;
    }
  }

  TsrgModel model;
  model.p = std::move(state.p);
  model.anchors = x_s.concat(x_t);
  model.kernel = ak.kernel;
  model.n_s = ak.n_s;
  model.n_t = ak.n_t;
  model.config = config;
  return {std::move(model), std::move(trace)};
}

FeatureMatrix regenerate(const TsrgModel& model, const FeatureMatrix& x) {
  if (x.d() != model.anchors.d()) {
    throw DimensionError("regenerate: model expects d=" +
                         std::to_string(model.anchors.d()) + ", input has d=" +
                         std::to_string(x.d()));
  }
  require_shape(model.p, model.anchors.n(), model.anchors.d(), "regenerate: P");
  return FeatureMatrix(model.p.transpose() * gram_matrix(model.anchors, x, model.kernel));
}

double fg_residual(const Eigen::MatrixXd& p, const AugmentedKernels& ak) {
  if (p.rows() != ak.delta_k.size()) {
    throw DimensionError("fg_residual: P has " + std::to_string(p.rows()) +
                         " rows, kernels have " + std::to_string(ak.delta_k.size()));
  }
  return (p.transpose() * ak.delta_k).squaredNorm();
}

double fg_residual(const TsrgModel& model, const AugmentedKernels& ak) {
  return fg_residual(model.p, ak);
}

}  // namespace tsrg
