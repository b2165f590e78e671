#include "entromin/solver.hpp"

#include <cmath>

#include "entromin/shrinkage.hpp"

namespace entromin {

namespace {

constexpr double kTiny = 1e-300;

double relative_change(const Vector& next, const Vector& cur) {
  const double denom = std::max(cur.norm(), kTiny);
  return (next - cur).norm() / denom;
}

bool is_zero(VectorCRef x) { return x.size() == 0 || x.cwiseAbs().maxCoeff() == 0.0; }

// Weights for the linearized penalty. At the origin every magnitude becomes
// epsilon, which makes the entropy distribution uniform and its gradient zero.
Vector safe_weights(VectorCRef x, const RegularizerSpec& spec) {
  if (spec.is_entropy() && is_zero(x)) return Vector::Zero(x.size());
  return penalty_weights(x, spec);
}

struct Candidate {
  Vector x;
  Vector ax;
  double data = 0.0;
  double penalty = 0.0;
  double objective = 0.0;
  int inner_iters = 0;
};

class ProximalEngine {
 public:
  ProximalEngine(VectorCRef y, const LinearOperator& op, const RegularizerSpec& spec, double kappa, const SolverConfig& cfg)
      : y_(y), op_(op), spec_(spec), kappa_(kappa), cfg_(cfg) {}

  Candidate evaluate(Vector x, Vector ax, double lambda) const {
    Candidate c;
    c.data = (y_ - ax).squaredNorm();
    c.penalty = solver_penalty(x, spec_);
    c.objective = c.data + lambda * c.penalty;
    c.x = std::move(x);
    c.ax = std::move(ax);
    return c;
  }

  // One proximal step from z (with az = A z).
  Candidate step(const Vector& z, const Vector& az, double lambda) const {
    const Vector x_prox = z - (2.0 / kappa_) * op_.adjoint(az - y_);
    Vector x_new;
    int inner = 1;
    if (spec_.kind() == RegularizerKind::L1) {
      x_new = reweighted_prox_step(x_prox, Vector::Ones(x_prox.size()), lambda, kappa_);
    } else {
      auto r = inner_reweighted_solve(x_prox, z, spec_, lambda, kappa_, cfg_.inner_max_iters, cfg_.inner_tol);
      x_new = std::move(r.x);
      inner = r.iterations;
    }
    Vector ax_new = op_.apply(x_new);
    Candidate c = evaluate(std::move(x_new), std::move(ax_new), lambda);
    c.inner_iters = inner;
    return c;
  }

 private:
  VectorCRef y_;
  const LinearOperator& op_;
  const RegularizerSpec& spec_;
  double kappa_;
  const SolverConfig& cfg_;
};

SolveResult run_solver(VectorCRef y, const LinearOperator& op, const SolverConfig& cfg, const RegularizerSpec& spec,
                       double kappa, Vector x) {
  SolveResult result;
  SolverTrace& trace = result.trace;
  trace.kappa = kappa;

  if (is_zero(y)) {
    trace.notes.emplace_back("y is zero: returning x = 0");
    trace.records.push_back(TraceRecord{});
    result.x = Vector::Zero(op.cols());
    return result;
  }

  const Vector aty = op.adjoint(y);
  const double lambda0 = cfg.lambda0.value_or(0.1 * 2.0 * aty.cwiseAbs().maxCoeff());
  const double lambda_min = cfg.lambda_min.value_or(1e-8 * lambda0);
  const bool fista = cfg.acceleration == Acceleration::Fista;

  ProximalEngine engine(y, op, spec, kappa, cfg);
  Vector ax = op.apply(x);
  double lambda = lambda0;

  for (int phase = 0;; ++phase) {
    Candidate cur = engine.evaluate(std::move(x), std::move(ax), lambda);
    trace.records.push_back({phase, 0, lambda, cur.objective, cur.data, cur.penalty, 0, 0.0, false});
    trace.phases = phase + 1;

    Vector x_prev = cur.x;
    Vector ax_prev = cur.ax;
    double t = 1.0;
    bool stationary_at_start = false;
    bool budget_exhausted = false;

    for (int it = 1; it <= cfg.outer_max_iters; ++it) {
      if (trace.total_outer_iters >= cfg.max_total_outer_iters) {
        budget_exhausted = true;
        break;
      }
      ++trace.total_outer_iters;

      const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
      const double beta = (t - 1.0) / t_next;
      const bool momentum = fista && beta > 0.0;

      Candidate next;
      bool restarted = false;
      if (momentum) {
        const Vector z = cur.x + beta * (cur.x - x_prev);
        const Vector az = cur.ax + beta * (cur.ax - ax_prev);
        next = engine.step(z, az, lambda);
        if (next.objective > cur.objective) {
          next = engine.step(cur.x, cur.ax, lambda);
          restarted = true;
        }
      } else {
        next = engine.step(cur.x, cur.ax, lambda);
      }
      // The plain step cannot increase the objective in exact arithmetic;
      // rounding is absorbed by staying put.
      if (next.objective > cur.objective) {
        next = cur;
        next.inner_iters = 0;
      }

      const double change = relative_change(next.x, cur.x);
      x_prev = std::move(cur.x);
      ax_prev = std::move(cur.ax);
      cur = std::move(next);
      t = (restarted || !fista) ? 1.0 : t_next;
      if (restarted) {
        x_prev = cur.x;
        ax_prev = cur.ax;
      }

      trace.records.push_back({phase, it, lambda, cur.objective, cur.data, cur.penalty, cur.inner_iters, change, restarted});
      if (change < cfg.outer_tol) {
        stationary_at_start = (it == 1);
        break;
      }
    }

    x = std::move(cur.x);
    ax = std::move(cur.ax);

    if (budget_exhausted) {
      trace.notes.emplace_back("total outer iteration budget exhausted");
      break;
    }
    if (!cfg.continuation_ratio) break;
    if (cfg.stop_when_stationary && stationary_at_start && !is_zero(x)) {
      trace.notes.emplace_back("continuation stopped: phase stationary at its first step");
      break;
    }
    const double next_lambda = *cfg.continuation_ratio * lambda;
    if (next_lambda < lambda_min) break;
    lambda = next_lambda;
  }

  result.x = std::move(x);
  return result;
}

}  // namespace

const char* to_string(Acceleration a) { return a == Acceleration::Fista ? "fista" : "none"; }

const char* to_string(Initializer i) {
  switch (i) {
    case Initializer::L1: return "l1";
    case Initializer::Zero: return "zero";
    case Initializer::Provided: return "provided";
  }
  return "?";
}

Acceleration acceleration_from_string(const std::string& s) {
  if (s == "fista") return Acceleration::Fista;
  if (s == "none" || s == "ista") return Acceleration::None;
  throw DomainError("unknown acceleration '" + s + "' (expected none or fista)");
}

Initializer initializer_from_string(const std::string& s) {
  if (s == "l1") return Initializer::L1;
  if (s == "zero") return Initializer::Zero;
  if (s == "provided") return Initializer::Provided;
  throw DomainError("unknown initializer '" + s + "' (expected l1, zero or provided)");
}

void SolverConfig::validate() const {
  auto positive = [](std::optional<double> v, const char* name) {
    if (v && !(*v > 0.0)) throw DomainError(std::string("SolverConfig: ") + name + " must be positive");
  };
  if (lambda0 && !(*lambda0 >= 0.0)) throw DomainError("SolverConfig: lambda0 must be nonnegative");
  positive(lambda_min, "lambda_min");
  positive(kappa, "kappa");
  if (init_lambda && !(*init_lambda >= 0.0)) throw DomainError("SolverConfig: init_lambda must be nonnegative");
  if (continuation_ratio && !(*continuation_ratio >= 0.9 && *continuation_ratio < 1.0)) {
    throw DomainError("SolverConfig: continuation ratio must lie in [0.9, 1)");
  }
  if (!(outer_tol > 0.0) || !(inner_tol > 0.0) || !(kappa_tol > 0.0)) {
    throw DomainError("SolverConfig: tolerances must be positive");
  }
  if (outer_max_iters < 1 || inner_max_iters < 1 || max_total_outer_iters < 1) {
    throw DomainError("SolverConfig: iteration caps must be at least 1");
  }
}

void SolverTrace::write_csv(std::ostream& os) const {
  os << "phase,outer_iter,lambda,objective,data_term,penalty_term,inner_iters\n";
  for (const auto& r : records) {
    os << r.phase << ',' << r.outer_iter << ',' << format_double(r.lambda) << ',' << format_double(r.objective) << ','
       << format_double(r.data_term) << ',' << format_double(r.penalty_term) << ',' << r.inner_iters << '\n';
  }
}

double estimate_kappa(const LinearOperator& op, double tol, int max_iters, double margin) {
  if (!(tol > 0.0)) throw DomainError("estimate_kappa: tol must be positive");
  Engine engine = make_engine({0x6b61707061ULL, 0});
  Vector v = gaussian_vector(engine, op.cols());
  v.normalize();
  double eig = 0.0;
  for (int it = 0; it < max_iters; ++it) {
    Vector w = op.adjoint(op.apply(v));
    const double next = v.dot(w);
    const double norm = w.norm();
    if (norm == 0.0) throw ConvergenceError("estimate_kappa: operator annihilated the iterate; pass an explicit kappa");
    v = w / norm;
    if (it > 0 && std::abs(next - eig) <= tol * std::abs(next)) return 2.0 * next * (1.0 + margin);
    eig = next;
  }
  throw ConvergenceError("estimate_kappa: power iteration did not converge in " + std::to_string(max_iters) +
                         " iterations; pass an explicit kappa");
}

Vector gradient_step(VectorCRef x, const LinearOperator& op, VectorCRef y, double kappa) {
  check_length("gradient_step: x", op.cols(), x.size());
  check_length("gradient_step: y", op.rows(), y.size());
  if (!(kappa > 0.0)) throw DomainError("gradient_step: kappa must be positive");
  return x - (2.0 / kappa) * op.adjoint(op.apply(x) - y);
}

double solver_penalty(VectorCRef x, const RegularizerSpec& spec) {
  if (spec.is_entropy() && is_zero(x)) return 0.0;
  return penalty_value(x, spec);
}

double proximal_objective(VectorCRef x, VectorCRef x_prox, const RegularizerSpec& spec, double lambda, double kappa) {
  return 0.5 * kappa * (x - x_prox).squaredNorm() + lambda * solver_penalty(x, spec);
}

InnerResult inner_reweighted_solve(VectorCRef x_prox, VectorCRef x_init, const RegularizerSpec& spec, double lambda,
                                   double kappa, int max_iters, double tol) {
  check_length("inner_reweighted_solve: x_init", x_prox.size(), x_init.size());
  InnerResult out;
  if (lambda == 0.0) {
    out.x = x_prox;
    out.iterations = 1;
    return out;
  }
  Vector cur = x_init;
  double p_cur = proximal_objective(cur, x_prox, spec, lambda, kappa);
  out.objective.push_back(p_cur);
  for (int r = 0; r < max_iters; ++r) {
    Vector next = reweighted_prox_step(x_prox, safe_weights(cur, spec), lambda, kappa);
    ++out.iterations;
    const double p_next = proximal_objective(next, x_prox, spec, lambda, kappa);
    out.objective.push_back(p_next);
    if (p_next > p_cur) {
      // Keeping the rising iterate lets the outer step move off points where
      // the reweighting oscillates; the outer objective guard still applies.
      cur = std::move(next);
      out.stopped_on_increase = true;
      break;
    }
    const double change = relative_change(next, cur);
    cur = std::move(next);
    p_cur = p_next;
    if (change < tol) break;
  }
  out.collapsed_to_zero = is_zero(cur) && !is_zero(x_prox);
  out.x = std::move(cur);
  return out;
}

SolverConfig l1_initializer_config(const SolverConfig& cfg) {
  SolverConfig c = cfg;
  c.regularizer = RegularizerSpec::l1(cfg.regularizer.epsilon());
  c.initializer = Initializer::Zero;
  c.initial_point = Vector();
  c.lambda0.reset();
  c.lambda_min.reset();
  c.init_lambda.reset();
  if (cfg.init_lambda) {
    c.lambda0 = *cfg.init_lambda;
    c.continuation_ratio.reset();
  } else if (!c.continuation_ratio) {
    c.continuation_ratio = 0.9;
  }
  return c;
}

SolveResult solve(VectorCRef y, const LinearOperator& op, const SolverConfig& cfg) {
  cfg.validate();
  check_length("solve: measurement vector", op.rows(), y.size());
  const double kappa = cfg.kappa ? *cfg.kappa : estimate_kappa(op, cfg.kappa_tol);

  Vector x0;
  std::vector<std::string> init_notes;
  switch (cfg.initializer) {
    case Initializer::Zero:
      x0 = Vector::Zero(op.cols());
      break;
    case Initializer::Provided:
      check_length("solve: initial point", op.cols(), cfg.initial_point.size());
      x0 = cfg.initial_point;
      break;
    case Initializer::L1:
      if (cfg.regularizer.kind() == RegularizerKind::L1) {
        x0 = Vector::Zero(op.cols());
      } else {
        SolverConfig init_cfg = l1_initializer_config(cfg);
        init_cfg.kappa = kappa;
        auto init = run_solver(y, op, init_cfg, init_cfg.regularizer, kappa, Vector::Zero(op.cols()));
        x0 = std::move(init.x);
        init_notes.push_back("L1 initializer: " + std::to_string(init.trace.total_outer_iters) + " outer iterations");
      }
      break;
  }
  auto result = run_solver(y, op, cfg, cfg.regularizer, kappa, std::move(x0));
  result.trace.notes.insert(result.trace.notes.begin(), init_notes.begin(), init_notes.end());
  return result;
}

SolveResult solve_l1(VectorCRef y, const LinearOperator& op, const SolverConfig& cfg) {
  SolverConfig c = cfg;
  c.regularizer = RegularizerSpec::l1(cfg.regularizer.epsilon());
  if (c.initializer != Initializer::Provided) c.initializer = Initializer::Zero;
  return solve(y, op, c);
}

}  // namespace entromin
