#pragma once

#include "entromin/common.hpp"

namespace entromin {

/// Global minimizer of 1/2 (x - xt)^2 + tau |x| for any real tau.
///
/// tau >= 0 is ordinary soft thresholding. For tau < 0 the problem is
/// nonconvex and the minimizer inflates the magnitude: xt - tau for xt >= 0,
/// xt + tau for xt < 0. At xt == 0 both +|tau| and -|tau| are optimal and the
/// nonnegative one is returned.
inline double soft_threshold(double xt, double tau) {
  if (tau >= 0.0) {
    const double mag = std::abs(xt) - tau;
    if (mag <= 0.0) return 0.0;
    return xt > 0.0 ? mag : -mag;
  }
  return xt >= 0.0 ? xt - tau : xt + tau;
}

/// Coordinatewise soft_threshold(xt_i, (lambda / kappa) w_i): the exact
/// minimizer of kappa/2 ||x - xt||^2 + lambda <w, |x|>.
Vector reweighted_prox_step(VectorCRef xt, VectorCRef weights, double lambda, double kappa);

}  // namespace entromin
