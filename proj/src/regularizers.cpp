#include "entromin/regularizers.hpp"

#include <cctype>
#include <cmath>

namespace entromin {

namespace {

void require_nonzero(VectorCRef x, const char* who) {
  if (x.size() == 0 || x.cwiseAbs().maxCoeff() == 0.0) {
    throw DomainError(std::string(who) + ": entropy undefined at origin (all-zero vector)");
  }
}

void require_kind(const RegularizerSpec& spec, RegularizerKind kind, const char* who) {
  if (spec.kind() != kind) {
    throw DomainError(std::string(who) + ": expected a " + to_string(kind) + " regularizer, got " +
                      to_string(spec.kind()));
  }
}

// Magnitudes with zeros lifted to epsilon, rescaled by their maximum. Every
// quantity below is scale-free or homogeneous, so working with u / m keeps
// powers and logs in range.
struct ScaledMagnitudes {
  Vector u;      // |x| (zeros -> eps) divided by scale
  double scale;  // max |x| after the shift
};

ScaledMagnitudes shifted_magnitudes(VectorCRef x, double epsilon) {
  Vector u = x.cwiseAbs();
  for (Index i = 0; i < u.size(); ++i) {
    if (u[i] == 0.0) u[i] = epsilon;
  }
  const double m = u.maxCoeff();
  return {u / m, m};
}

// Shannon pieces at scaled magnitudes u: q, and log of the q-weighted
// geometric mean of u (log nu / scale).
struct ShannonParts {
  Vector q;
  double log_nu;
};

ShannonParts shannon_parts(const Vector& u, double p) {
  Vector a = u.array().pow(p);
  const double total = a.sum();
  Vector q = a / total;
  double log_nu = 0.0;
  for (Index i = 0; i < u.size(); ++i) {
    if (q[i] > 0.0) log_nu += q[i] * std::log(u[i]);
  }
  return {std::move(q), log_nu};
}

}  // namespace

const char* to_string(RegularizerKind kind) {
  switch (kind) {
    case RegularizerKind::L1: return "L1";
    case RegularizerKind::LpP: return "LpP";
    case RegularizerKind::SEF: return "SEF";
    case RegularizerKind::REF: return "REF";
  }
  return "?";
}

RegularizerKind regularizer_kind_from_string(const std::string& name) {
  std::string s;
  for (char c : name) s += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (s == "l1") return RegularizerKind::L1;
  if (s == "lpp" || s == "lp") return RegularizerKind::LpP;
  if (s == "sef") return RegularizerKind::SEF;
  if (s == "ref") return RegularizerKind::REF;
  throw DomainError("unknown regularizer '" + name + "' (expected l1, lp, sef or ref)");
}

RegularizerSpec::RegularizerSpec(RegularizerKind kind, double p, double alpha, double epsilon)
    : kind_(kind), p_(p), alpha_(alpha), epsilon_(epsilon) {
  if (!(epsilon > 0.0)) throw DomainError("regularizer epsilon must be positive");
  switch (kind) {
    case RegularizerKind::L1:
      p_ = 1.0;
      break;
    case RegularizerKind::LpP:
      if (!(p > 0.0 && p < 1.0)) throw DomainError("LpP regularizer needs 0 < p < 1, got p = " + std::to_string(p));
      break;
    case RegularizerKind::SEF:
      if (!(p > 0.0)) throw DomainError("SEF regularizer needs p > 0, got p = " + std::to_string(p));
      break;
    case RegularizerKind::REF:
      if (!(p > 0.0)) throw DomainError("REF regularizer needs p > 0, got p = " + std::to_string(p));
      if (!(alpha > 0.0) || alpha == 1.0) {
        throw DomainError("REF regularizer needs alpha > 0 and alpha != 1, got alpha = " + std::to_string(alpha));
      }
      break;
  }
  if (kind != RegularizerKind::REF) alpha_ = 0.0;
}

RegularizerSpec RegularizerSpec::l1(double epsilon) { return {RegularizerKind::L1, 1.0, 0.0, epsilon}; }
RegularizerSpec RegularizerSpec::lpp(double p, double epsilon) { return {RegularizerKind::LpP, p, 0.0, epsilon}; }
RegularizerSpec RegularizerSpec::sef(double p, double epsilon) { return {RegularizerKind::SEF, p, 0.0, epsilon}; }
RegularizerSpec RegularizerSpec::ref(double p, double alpha, double epsilon) {
  return {RegularizerKind::REF, p, alpha, epsilon};
}
RegularizerSpec RegularizerSpec::make(RegularizerKind kind, double p, double alpha, double epsilon) {
  return {kind, p, alpha, epsilon};
}

Vector prob_map(VectorCRef x, double p) {
  if (!(p > 0.0)) throw DomainError("prob_map: p must be positive");
  require_nonzero(x, "prob_map");
  const double m = x.cwiseAbs().maxCoeff();
  Vector a = (x.cwiseAbs() / m).array().pow(p);
  return a / a.sum();
}

Vector mapped_simplex_vector(VectorCRef x, double p) {
  Vector q = prob_map(x, p);
  for (Index i = 0; i < q.size(); ++i) {
    if (x[i] < 0.0) q[i] = -q[i];
  }
  return q;
}

double sef_value(VectorCRef x, const RegularizerSpec& spec) {
  require_kind(spec, RegularizerKind::SEF, "sef_value");
  const Vector q = prob_map(x, spec.p());
  double h = 0.0;
  for (Index i = 0; i < q.size(); ++i) {
    if (q[i] > 0.0) h -= q[i] * std::log(q[i]);
  }
  return std::max(h, 0.0);
}

double ref_value(VectorCRef x, const RegularizerSpec& spec) {
  require_kind(spec, RegularizerKind::REF, "ref_value");
  const Vector q = prob_map(x, spec.p());
  const double alpha = spec.alpha();
  double sum = 0.0;
  for (Index i = 0; i < q.size(); ++i) {
    if (q[i] > 0.0) sum += std::pow(q[i], alpha);
  }
  return std::max(std::log(sum) / (1.0 - alpha), 0.0);
}

// dh/du_i = p^2 q_i / u_i * (log nu - log u_i), nu = exp(sum q_l log u_l).
// Homogeneous of degree -1 in u, hence the final division by the scale.
Vector sef_grad_mag(VectorCRef x, const RegularizerSpec& spec) {
  require_kind(spec, RegularizerKind::SEF, "sef_grad_mag");
  require_nonzero(x, "sef_grad_mag");
  const auto [u, scale] = shifted_magnitudes(x, spec.epsilon());
  const double p = spec.p();
  const auto [q, log_nu] = shannon_parts(u, p);
  Vector g(u.size());
  for (Index i = 0; i < u.size(); ++i) g[i] = p * p * q[i] / u[i] * (log_nu - std::log(u[i]));
  return g / scale;
}

// dh/du_i = p a / (1 - a) * (r_i - q_i) / u_i, with q_i = u_i^p / S and the
// escort weights r_i = u_i^(p a) / T.
Vector ref_grad_mag(VectorCRef x, const RegularizerSpec& spec) {
  require_kind(spec, RegularizerKind::REF, "ref_grad_mag");
  require_nonzero(x, "ref_grad_mag");
  const auto [u, scale] = shifted_magnitudes(x, spec.epsilon());
  const double p = spec.p();
  const double alpha = spec.alpha();
  const Vector a = u.array().pow(p);
  const Vector b = u.array().pow(p * alpha);
  const Vector q = a / a.sum();
  const Vector r = b / b.sum();
  const double c = p * alpha / (1.0 - alpha);
  Vector g(u.size());
  for (Index i = 0; i < u.size(); ++i) g[i] = c * (r[i] - q[i]) / u[i];
  return g / scale;
}

double nu_threshold(VectorCRef x, const RegularizerSpec& spec) {
  if (!spec.is_entropy()) throw DomainError("nu_threshold: only defined for SEF and REF regularizers");
  require_nonzero(x, "nu_threshold");
  const auto [u, scale] = shifted_magnitudes(x, spec.epsilon());
  const double p = spec.p();
  if (spec.kind() == RegularizerKind::SEF) return scale * std::exp(shannon_parts(u, p).log_nu);
  const double alpha = spec.alpha();
  const double s = u.array().pow(p).sum();
  const double t = u.array().pow(p * alpha).sum();
  return scale * std::exp(std::log(t / s) / (p * alpha - p));
}

BaselinePenalty baseline_value_and_weight(VectorCRef x, const RegularizerSpec& spec) {
  switch (spec.kind()) {
    case RegularizerKind::L1:
      return {x.cwiseAbs().sum(), Vector::Ones(x.size())};
    case RegularizerKind::LpP: {
      const double p = spec.p();
      const Vector mag = x.cwiseAbs();
      Vector w = (mag.array() + spec.epsilon()).pow(p - 1.0) * p;
      return {mag.array().pow(p).sum(), std::move(w)};
    }
    default:
      throw DomainError("baseline_value_and_weight: expected an L1 or LpP regularizer");
  }
}

double penalty_value(VectorCRef x, const RegularizerSpec& spec) {
  switch (spec.kind()) {
    case RegularizerKind::L1: return x.cwiseAbs().sum();
    case RegularizerKind::LpP: return x.cwiseAbs().array().pow(spec.p()).sum();
    case RegularizerKind::SEF: return sef_value(x, spec);
    case RegularizerKind::REF: return ref_value(x, spec);
  }
  return 0.0;
}

Vector penalty_weights(VectorCRef x, const RegularizerSpec& spec) {
  switch (spec.kind()) {
    case RegularizerKind::L1:
    case RegularizerKind::LpP: return baseline_value_and_weight(x, spec).weights;
    case RegularizerKind::SEF: return sef_grad_mag(x, spec);
    case RegularizerKind::REF: return ref_grad_mag(x, spec);
  }
  return Vector::Ones(x.size());
}

}  // namespace entromin
