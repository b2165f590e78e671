#pragma once

// Reference computations used as expected values in tests. They go the slow,
// direct way on purpose and share no code with the library.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

inline double shrink_objective(double x, double xt, double tau) {
  return 0.5 * (x - xt) * (x - xt) + tau * std::abs(x);
}

// Minimum of 1/2 (x - xt)^2 + tau |x| over the grid -4:1e-4:4, then each grid
// local minimum (and 0) is refined by repeated zooming.
inline double brute_force_shrink_min(double xt, double tau) {
  constexpr int n = 80001;
  constexpr double lo = -4.0, h = 1e-4;
  static const std::vector<double> grid = [] {
    std::vector<double> g(n);
    for (int k = 0; k < n; ++k) g[k] = lo + k * h;
    return g;
  }();
  thread_local std::vector<double> q(n);
  for (int k = 0; k < n; ++k) {
    const double d = grid[k] - xt;
    q[k] = 0.5 * d * d + tau * std::abs(grid[k]);
  }
  double best = std::min(shrink_objective(0.0, xt, tau), *std::min_element(q.begin(), q.end()));
  std::vector<double> centres{0.0};
  for (int k = 1; k + 1 < n; ++k) {
    if (q[k] <= q[k - 1] && q[k] <= q[k + 1]) centres.push_back(grid[k]);
  }
  for (double c : centres) {
    double width = 2 * h;
    for (int round = 0; round < 5; ++round) {
      double arg = c, arg_v = shrink_objective(c, xt, tau);
      for (int k = 0; k <= 200; ++k) {
        const double x = c - width + 2 * width * k / 200.0;
        const double v = shrink_objective(x, xt, tau);
        if (v < arg_v) {
          arg = x;
          arg_v = v;
        }
      }
      best = std::min(best, arg_v);
      c = arg;
      width /= 50.0;
    }
  }
  return best;
}

// Shannon entropy of |x|^p / sum |x|^p, summed in long double.
inline double shannon(const Eigen::VectorXd& x, double p) {
  long double total = 0.0L;
  for (double v : x) total += std::pow(static_cast<long double>(std::abs(v)), p);
  long double h = 0.0L;
  for (double v : x) {
    const long double q = std::pow(static_cast<long double>(std::abs(v)), p) / total;
    if (q > 0) h -= q * std::log(q);
  }
  return static_cast<double>(h);
}

inline double renyi(const Eigen::VectorXd& x, double p, double alpha) {
  long double total = 0.0L;
  for (double v : x) total += std::pow(static_cast<long double>(std::abs(v)), p);
  long double s = 0.0L;
  for (double v : x) s += std::pow(std::pow(static_cast<long double>(std::abs(v)), p) / total, alpha);
  return static_cast<double>(std::log(s) / (1.0L - alpha));
}

// Central differences of f at u, step h (relative to max(1, |u_i|)).
inline Eigen::VectorXd central_fd(const std::function<double(const Eigen::VectorXd&)>& f, const Eigen::VectorXd& u,
                                  double h = 1e-6) {
  Eigen::VectorXd g(u.size());
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    const double step = h * std::max(1.0, std::abs(u(i)));
    Eigen::VectorXd up = u, dn = u;
    up(i) += step;
    dn(i) -= step;
    g(i) = (f(up) - f(dn)) / (2 * step);
  }
  return g;
}

// Orthonormal DCT-II matrix from the cosine formula.
inline Eigen::MatrixXd dct_matrix(Eigen::Index n) {
  Eigen::MatrixXd c(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double scale = std::sqrt((k == 0 ? 1.0 : 2.0) / static_cast<double>(n));
    for (Eigen::Index j = 0; j < n; ++j) {
      c(k, j) = scale * std::cos(std::numbers::pi * static_cast<double>(k) * (2.0 * j + 1.0) / (2.0 * n));
    }
  }
  return c;
}

inline double max_gram_eigenvalue(const Eigen::MatrixXd& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a.transpose() * a);
  return es.eigenvalues().maxCoeff();
}

}  // namespace oracle
