#pragma once

#include <string>
#include <utility>

#include "entromin/common.hpp"

namespace entromin {

enum class RegularizerKind { L1, LpP, SEF, REF };

const char* to_string(RegularizerKind kind);
RegularizerKind regularizer_kind_from_string(const std::string& name);

/// Which penalty g(x) and its parameters. Ranges are checked on construction:
/// LpP needs 0 < p < 1, SEF needs p > 0, REF needs p > 0, alpha > 0, alpha != 1.
class RegularizerSpec {
 public:
  static constexpr double kDefaultEpsilon = 1e-12;

  static RegularizerSpec l1(double epsilon = kDefaultEpsilon);
  static RegularizerSpec lpp(double p, double epsilon = kDefaultEpsilon);
  static RegularizerSpec sef(double p, double epsilon = kDefaultEpsilon);
  static RegularizerSpec ref(double p, double alpha, double epsilon = kDefaultEpsilon);
  static RegularizerSpec make(RegularizerKind kind, double p, double alpha, double epsilon = kDefaultEpsilon);

  RegularizerKind kind() const { return kind_; }
  double p() const { return p_; }
  double alpha() const { return alpha_; }
  double epsilon() const { return epsilon_; }

  bool is_entropy() const { return kind_ == RegularizerKind::SEF || kind_ == RegularizerKind::REF; }

  friend bool operator==(const RegularizerSpec&, const RegularizerSpec&) = default;

 private:
  RegularizerSpec(RegularizerKind kind, double p, double alpha, double epsilon);

  RegularizerKind kind_;
  double p_;
  double alpha_;
  double epsilon_;
};

/// q_i = |x_i|^p / ||x||_p^p. Throws DomainError at x = 0.
Vector prob_map(VectorCRef x, double p);

/// sign(x_i) |x_i|^p / ||x||_p^p; the absolute values sum to one.
Vector mapped_simplex_vector(VectorCRef x, double p);

/// Shannon entropy function h_p(x) = -sum q_i log q_i, with 0 log 0 = 0.
double sef_value(VectorCRef x, const RegularizerSpec& spec);

/// Renyi entropy function h_{p,a}(x) = log(sum q_i^a) / (1 - a).
double ref_value(VectorCRef x, const RegularizerSpec& spec);

/// dh_p/d|x_i|. Zero magnitudes are replaced by epsilon before evaluation.
Vector sef_grad_mag(VectorCRef x, const RegularizerSpec& spec);

/// dh_{p,a}/d|x_i|, same epsilon convention as sef_grad_mag.
Vector ref_grad_mag(VectorCRef x, const RegularizerSpec& spec);

/// Magnitude at which the entropy gradient changes sign: components with
/// |x_i| > nu have negative gradient, those below have positive gradient.
double nu_threshold(VectorCRef x, const RegularizerSpec& spec);

struct BaselinePenalty {
  double value;
  Vector weights;
};

/// L1: (sum |x_i|, 1). LpP: (sum |x_i|^p, p (|x_i| + eps)^(p-1)).
BaselinePenalty baseline_value_and_weight(VectorCRef x, const RegularizerSpec& spec);

/// g(x) for any kind. Entropies throw at the origin.
double penalty_value(VectorCRef x, const RegularizerSpec& spec);

/// Linearization weights of g in |x| for any kind (all ones for L1).
Vector penalty_weights(VectorCRef x, const RegularizerSpec& spec);

}  // namespace entromin
