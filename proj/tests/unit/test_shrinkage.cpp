#include <doctest.h>

#include "entromin/random.hpp"
#include "entromin/shrinkage.hpp"
#include "oracles.hpp"

using namespace entromin;

TEST_CASE("soft threshold examples") {
  CHECK(soft_threshold(0.3, 0.5) == 0.0);
  CHECK(soft_threshold(1.0, 0.5) == 0.5);
  CHECK(soft_threshold(-1.0, 0.5) == -0.5);
  CHECK(std::abs(soft_threshold(0.3, -0.5) - 0.8) < 1e-15);
  CHECK(std::abs(soft_threshold(-0.3, -0.5) + 0.8) < 1e-15);
  CHECK(soft_threshold(0.0, -0.5) == 0.5);
  CHECK(soft_threshold(0.0, 0.5) == 0.0);
  CHECK(soft_threshold(0.7, 0.0) == 0.7);
}

TEST_CASE("negative-threshold cases against the grid minimizer") {
  for (double xt : {-1.7, -0.3, -1e-3, 0.0, 1e-3, 0.3, 1.7}) {
    for (double tau : {-1.5, -0.5, -1e-3, 0.0, 0.4, 1.2}) {
      CAPTURE(xt);
      CAPTURE(tau);
      const double q = oracle::shrink_objective(soft_threshold(xt, tau), xt, tau);
      CHECK(q <= oracle::brute_force_shrink_min(xt, tau) + 1e-8);
    }
  }
}

TEST_CASE("odd symmetry away from the tie and monotone in the input") {
  Engine eng = make_engine({11, 0});
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int k = 0; k < 1000; ++k) {
    const double xt = u(eng), tau = u(eng);
    if (xt != 0.0) CHECK(soft_threshold(-xt, tau) == -soft_threshold(xt, tau));
    const double xt2 = xt + std::abs(u(eng));
    if (tau >= 0.0 || xt > 0.0 || xt2 < 0.0) CHECK(soft_threshold(xt2, tau) >= soft_threshold(xt, tau));
  }
  // for tau < 0 the map jumps by 2|tau| across zero
  CHECK(std::abs(soft_threshold(1e-12, -0.5) - soft_threshold(-1e-12, -0.5) - 1.0) < 1e-11);
}

TEST_CASE("output magnitude shrinks with tau") {
  for (double xt : {-1.2, 0.4, 2.0}) {
    double prev = std::numeric_limits<double>::infinity();
    for (double tau = -1.0; tau <= 2.5; tau += 0.25) {
      const double mag = std::abs(soft_threshold(xt, tau));
      CHECK(mag <= prev);
      prev = mag;
    }
  }
}

TEST_CASE("reweighted prox step") {
  Engine eng = make_engine({12, 0});
  const Vector xt = gaussian_vector(eng, 25);
  CHECK(reweighted_prox_step(xt, Vector::Zero(25), 3.0, 2.0) == xt);
  CHECK(reweighted_prox_step(xt, gaussian_vector(eng, 25), 0.0, 2.0) == xt);

  Vector xs = xt.cwiseMax(-1.9).cwiseMin(1.9);
  const Vector w = gaussian_vector(eng, 25).cwiseMax(-1.5).cwiseMin(1.5);
  const double lambda = 0.7, kappa = 1.4;
  const Vector out = reweighted_prox_step(xs, w, lambda, kappa);
  for (Index i = 0; i < 25; ++i) {
    const double tau = lambda / kappa * w(i);
    CHECK(oracle::shrink_objective(out(i), xs(i), tau) <= oracle::brute_force_shrink_min(xs(i), tau) + 1e-8);
  }
  CHECK_THROWS_AS(reweighted_prox_step(xt, Vector::Zero(3), 1.0, 1.0), DimensionError);
}
