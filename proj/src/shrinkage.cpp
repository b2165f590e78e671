#include "entromin/shrinkage.hpp"

namespace entromin {

Vector reweighted_prox_step(VectorCRef xt, VectorCRef weights, double lambda, double kappa) {
  check_length("reweighted_prox_step weights", xt.size(), weights.size());
  if (!(kappa > 0.0)) throw DomainError("reweighted_prox_step: kappa must be positive");
  if (!(lambda >= 0.0)) throw DomainError("reweighted_prox_step: lambda must be nonnegative");
  const double scale = lambda / kappa;
  Vector out(xt.size());
  for (Index i = 0; i < xt.size(); ++i) out[i] = soft_threshold(xt[i], scale * weights[i]);
  return out;
}

}  // namespace entromin
