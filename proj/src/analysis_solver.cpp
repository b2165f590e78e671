#include <cmath>

#include "entromin/shrinkage.hpp"
#include "entromin/solver.hpp"

namespace entromin {

namespace {

Vector analysis_weights(VectorCRef coeffs, const RegularizerSpec& spec) {
  if (spec.is_entropy() && coeffs.cwiseAbs().maxCoeff() == 0.0) return Vector::Zero(coeffs.size());
  return penalty_weights(coeffs, spec);
}

}  // namespace

double weighted_analysis_objective(VectorCRef s, VectorCRef s_prox, const LinearOperator& frame, VectorCRef weights,
                                   double lambda) {
  const Vector coeffs = frame.adjoint(s);
  return (s - s_prox).squaredNorm() + lambda * weights.dot(coeffs.cwiseAbs());
}

// Splitting d = V^T s with penalty mu/2 ||d - V^T s - b||^2:
//   s <- (2 s_prox + mu V (d - b)) / (2 + mu)      (uses V V^T = I)
//   d <- soft_threshold(V^T s + b, lambda w / mu)
//   b <- b + V^T s - d
Vector solve_weighted_analysis(VectorCRef s_prox, const LinearOperator& frame, VectorCRef weights, double lambda,
                               double mu, int max_iters, double tol, VectorCRef s_start) {
  check_length("solve_weighted_analysis: s_prox", frame.rows(), s_prox.size());
  check_length("solve_weighted_analysis: s_start", frame.rows(), s_start.size());
  check_length("solve_weighted_analysis: weights", frame.cols(), weights.size());
  if (!(mu > 0.0)) throw DomainError("solve_weighted_analysis: mu must be positive");
  if (lambda == 0.0) return s_prox;

  Vector s = s_start;
  Vector d = frame.adjoint(s);
  Vector b = Vector::Zero(d.size());
  const Vector tau = (lambda / mu) * weights;
  for (int k = 0; k < max_iters; ++k) {
    Vector s_next = (2.0 * s_prox + mu * frame.apply(d - b)) / (2.0 + mu);
    const Vector vs = frame.adjoint(s_next);
    for (Index i = 0; i < d.size(); ++i) d[i] = soft_threshold(vs[i] + b[i], tau[i]);
    b += vs - d;
    const double change = (s_next - s).norm() / std::max(s.norm(), 1e-300);
    s = std::move(s_next);
    // the first s-update reproduces the start exactly, so only test later ones
    if (k > 0 && change < tol) break;
  }
  return s;
}

AnalysisResult solve_analysis_image(VectorCRef y, const LinearOperator& sensing, const LinearOperator& frame,
                                    const AnalysisConfig& cfg) {
  check_length("solve_analysis_image: measurements", sensing.rows(), y.size());
  if (sensing.cols() != frame.rows()) {
    throw DimensionError("solve_analysis_image: sensing operator acts on " + std::to_string(sensing.cols()) +
                         " pixels but the frame synthesizes " + std::to_string(frame.rows()));
  }
  if (!(cfg.lambda >= 0.0)) throw DomainError("solve_analysis_image: lambda must be nonnegative");

  AnalysisResult result;
  Vector s = sensing.adjoint(y);
  if (cfg.init_l1_lambda && cfg.regularizer.kind() != RegularizerKind::L1) {
    AnalysisConfig init = cfg;
    init.regularizer = RegularizerSpec::l1(cfg.regularizer.epsilon());
    init.lambda = *cfg.init_l1_lambda;
    init.init_l1_lambda.reset();
    s = solve_analysis_image(y, sensing, frame, init).s;
  }

  for (int t = 0; t < cfg.outer_max_iters; ++t) {
    // kappa = 2 for orthonormal rows, so the proximal point is s - U^T (U s - y).
    const Vector s_prox = s - sensing.adjoint(sensing.apply(s) - y);
    const Vector weights = analysis_weights(frame.adjoint(s), cfg.regularizer);
    Vector s_next =
        solve_weighted_analysis(s_prox, frame, weights, cfg.lambda, cfg.mu, cfg.bregman_max_iters, cfg.bregman_tol, s_prox);
    const double change = (s_next - s).norm() / std::max(s.norm(), 1e-300);
    s = std::move(s_next);
    ++result.outer_iters;
    result.objective.push_back((y - sensing.apply(s)).squaredNorm() +
                               cfg.lambda * solver_penalty(frame.adjoint(s), cfg.regularizer));
    if (change < cfg.outer_tol) break;
  }
  result.s = std::move(s);
  return result;
}

}  // namespace entromin
