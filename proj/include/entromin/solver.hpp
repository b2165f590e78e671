#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "entromin/common.hpp"
#include "entromin/operators.hpp"
#include "entromin/regularizers.hpp"

namespace entromin {

enum class Acceleration { None, Fista };
enum class Initializer { L1, Zero, Provided };

const char* to_string(Acceleration a);
const char* to_string(Initializer i);
Acceleration acceleration_from_string(const std::string& s);
Initializer initializer_from_string(const std::string& s);

struct SolverConfig {
  RegularizerSpec regularizer = RegularizerSpec::l1();

  // Unset means automatic: lambda0 = 0.1 ||2 A^T y||_inf, lambda_min = 1e-8 lambda0,
  // kappa = estimate_kappa(A).
  std::optional<double> lambda0;
  std::optional<double> lambda_min;
  std::optional<double> kappa;
  // lambda_{k+1} = ratio * lambda_k between phases; unset runs one fixed-lambda phase.
  std::optional<double> continuation_ratio = 0.9;

  int outer_max_iters = 500;  // per lambda phase
  int inner_max_iters = 50;
  long max_total_outer_iters = 20000;
  double outer_tol = 1e-6;
  double inner_tol = 1e-4;
  double kappa_tol = 1e-10;

  Acceleration acceleration = Acceleration::Fista;
  Initializer initializer = Initializer::L1;
  Vector initial_point;  // used when initializer == Provided

  // Final lambda of the L1 initializer. Unset: the same continuation schedule
  // as this config, down to the automatic floor.
  std::optional<double> init_lambda;

  // Stop the continuation once a whole phase is stationary at its first step.
  bool stop_when_stationary = false;

  void validate() const;
};

struct TraceRecord {
  int phase = 0;
  int outer_iter = 0;  // 0 is the phase's starting point
  double lambda = 0.0;
  double objective = 0.0;
  double data_term = 0.0;
  double penalty_term = 0.0;
  int inner_iters = 0;
  double step_norm = 0.0;
  bool restarted = false;
};

struct SolverTrace {
  std::vector<TraceRecord> records;
  double kappa = 0.0;
  long total_outer_iters = 0;
  int phases = 0;
  std::vector<std::string> notes;

  /// phase, outer_iter, lambda, objective, data_term, penalty_term, inner_iters
  void write_csv(std::ostream& os) const;
};

struct SolveResult {
  Vector x;
  SolverTrace trace;
};

/// 2 lambda_max(A^T A) (1 + margin) by power iteration on A^T A.
double estimate_kappa(const LinearOperator& op, double tol = 1e-10, int max_iters = 5000, double margin = 0.01);

/// x - (1/kappa) 2 (A^T A x - A^T y).
Vector gradient_step(VectorCRef x, const LinearOperator& op, VectorCRef y, double kappa);

struct InnerResult {
  Vector x;
  int iterations = 0;
  bool collapsed_to_zero = false;
  // The last iterate raised the proximal objective; it is still returned and
  // the outer loop decides whether to keep it.
  bool stopped_on_increase = false;
  std::vector<double> objective;  // proximal objective at x_init and each iterate
};

/// Reweighted-l1 iterations on kappa/2 ||x - x_prox||^2 + lambda g(x), with g
/// linearized in |x| at the previous inner iterate. Stops on relative change
/// below tol, on the iteration cap, or after the first iterate that increases
/// the objective.
InnerResult inner_reweighted_solve(VectorCRef x_prox, VectorCRef x_init, const RegularizerSpec& spec, double lambda,
                                   double kappa, int max_iters, double tol);

/// kappa/2 ||x - x_prox||^2 + lambda g(x); g(0) is taken as 0.
double proximal_objective(VectorCRef x, VectorCRef x_prox, const RegularizerSpec& spec, double lambda, double kappa);

/// Penalty as used in solver objectives: g(x), with g(0) := 0 for entropies.
double solver_penalty(VectorCRef x, const RegularizerSpec& spec);

/// Minimizes ||y - A x||^2 + lambda g(x) with proximal steps, reweighted
/// inner iterations, optional FISTA momentum (restarted on any objective
/// increase) and lambda continuation.
SolveResult solve(VectorCRef y, const LinearOperator& op, const SolverConfig& cfg);

/// ISTA/FISTA on ||y - A x||^2 + lambda ||x||_1 with the same continuation
/// machinery. The regularizer in cfg is ignored; the initializer defaults to
/// zero unless a point is provided.
SolveResult solve_l1(VectorCRef y, const LinearOperator& op, const SolverConfig& cfg);

/// The configuration used to produce the L1 initial point for cfg.
SolverConfig l1_initializer_config(const SolverConfig& cfg);

// ---------------------------------------------------------------------------
// Analysis-form image recovery: min_s ||y - U s||^2 + lambda g(V^T s).

struct AnalysisConfig {
  RegularizerSpec regularizer = RegularizerSpec::l1();
  double lambda = 0.1;
  int outer_max_iters = 100;
  double outer_tol = 1e-5;
  double mu = 1.0;            // augmented-penalty parameter of the splitting
  int bregman_max_iters = 50;
  double bregman_tol = 1e-7;
  // Start from the L1 analysis solution at this lambda (entropy and LpP only).
  std::optional<double> init_l1_lambda;
};

struct AnalysisResult {
  Vector s;
  std::vector<double> objective;  // per outer iteration
  int outer_iters = 0;
};

/// min_s ||s - s_prox||^2 + lambda sum_i w_i |(V^T s)_i| by split Bregman
/// iterations on d = V^T s. Requires V V^T = I.
Vector solve_weighted_analysis(VectorCRef s_prox, const LinearOperator& frame, VectorCRef weights, double lambda,
                               double mu, int max_iters, double tol, VectorCRef s_start);

double weighted_analysis_objective(VectorCRef s, VectorCRef s_prox, const LinearOperator& frame, VectorCRef weights,
                                   double lambda);

/// Outer proximal iterations with kappa = 2 (U has orthonormal rows).
AnalysisResult solve_analysis_image(VectorCRef y, const LinearOperator& sensing, const LinearOperator& frame,
                                    const AnalysisConfig& cfg);

}  // namespace entromin
