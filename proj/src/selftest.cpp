#include "entromin/selftest.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <sstream>

#include "entromin/experiments.hpp"
#include "entromin/random.hpp"
#include "entromin/regularizers.hpp"
#include "entromin/shrinkage.hpp"
#include "entromin/solver.hpp"
#include "entromin/wavelets.hpp"

namespace entromin {

namespace {

double shrink_objective(double x, double xt, double tau) { return 0.5 * (x - xt) * (x - xt) + tau * std::abs(x); }

// Grid search with repeated zooming around the best coarse candidates. Both
// local minima are followed because a negative threshold makes the
// objective two-welled.
double brute_force_min(double xt, double tau) {
  const double radius = std::abs(xt) + std::abs(tau) + 1.0;
  constexpr int coarse = 4001;
  const double h = 2.0 * radius / (coarse - 1);
  std::vector<double> f(coarse);
  for (int k = 0; k < coarse; ++k) f[k] = shrink_objective(-radius + k * h, xt, tau);
  std::vector<double> starts{0.0};
  for (int k = 1; k + 1 < coarse; ++k) {
    if (f[k] <= f[k - 1] && f[k] <= f[k + 1]) starts.push_back(-radius + k * h);
  }
  double best = shrink_objective(0.0, xt, tau);
  for (double c : starts) {
    double centre = c, width = 2.0 * h;
    for (int round = 0; round < 6; ++round) {
      constexpr int fine = 201;
      double arg = centre, val = shrink_objective(centre, xt, tau);
      for (int k = 0; k < fine; ++k) {
        const double x = centre - width + 2.0 * width * k / (fine - 1);
        const double v = shrink_objective(x, xt, tau);
        if (v < val) val = v, arg = x;
      }
      centre = arg;
      width /= 50.0;
      best = std::min(best, val);
    }
  }
  return best;
}

SelftestCheck shrinkage_check(const SelftestOptions& opts, Engine& eng) {
  const int samples = opts.quick ? 500 : 10000;
  std::uniform_real_distribution<double> tau_dist(-2.0, 2.0), xt_dist(-5.0, 5.0);
  double worst = 0.0;
  for (int k = 0; k < samples; ++k) {
    const double xt = xt_dist(eng), tau = tau_dist(eng);
    const double used_tau = opts.corrupt_threshold_sign ? -tau : tau;
    const double x = soft_threshold(xt, used_tau);
    worst = std::max(worst, std::abs(shrink_objective(x, xt, tau) - brute_force_min(xt, tau)));
  }
  std::ostringstream msg;
  msg << samples << " samples, worst objective gap " << worst;
  return {"shrinkage oracle", worst < 1e-8, msg.str(), 0.0};
}

double relative_fd_error(const std::function<double(const Vector&)>& f, const Vector& x, const Vector& grad) {
  Vector fd(x.size());
  for (Index i = 0; i < x.size(); ++i) {
    const double h = 1e-6 * std::max(1.0, std::abs(x(i)));
    Vector xp = x, xm = x;
    xp(i) += h;
    xm(i) -= h;
    fd(i) = (f(xp) - f(xm)) / (2.0 * h);
  }
  return (fd - grad).norm() / std::max(grad.norm(), 1e-300);
}

SelftestCheck gradient_check(const SelftestOptions& opts, Engine& eng) {
  const int vectors = opts.quick ? 10 : 100;
  std::uniform_real_distribution<double> mag(0.2, 2.0);
  std::bernoulli_distribution sign(0.5);
  double worst = 0.0;
  for (int k = 0; k < vectors; ++k) {
    Vector x(20);
    for (Index i = 0; i < x.size(); ++i) x(i) = (sign(eng) ? 1.0 : -1.0) * mag(eng);
    // derivatives are taken in |x|, so work on the magnitudes directly
    const Vector u = x.cwiseAbs();
    for (double p : {0.5, 1.0, 1.1, 2.0}) {
      const auto sef = RegularizerSpec::sef(p);
      worst = std::max(worst, relative_fd_error([&](const Vector& v) { return sef_value(v, sef); }, u,
                                                sef_grad_mag(u, sef)));
      for (double alpha : {0.5, 1.1, 2.0}) {
        const auto ref = RegularizerSpec::ref(p, alpha);
        worst = std::max(worst, relative_fd_error([&](const Vector& v) { return ref_value(v, ref); }, u,
                                                  ref_grad_mag(u, ref)));
      }
    }
  }
  std::ostringstream msg;
  msg << vectors << " vectors, worst relative error " << worst;
  return {"gradient finite differences", worst < 1e-5, msg.str(), 0.0};
}

double tight_frame_residual(const LinearOperator& op, Engine& eng, int probes) {
  double worst = 0.0;
  for (int k = 0; k < probes; ++k) {
    const Vector v = gaussian_vector(eng, op.rows());
    worst = std::max(worst, (op.apply(op.adjoint(v)) - v).norm() / v.norm());
  }
  return worst;
}

SelftestCheck frame_check(const SelftestOptions& opts, Engine& eng) {
  double worst = 0.0, dot = 0.0;
  for (Index side : {Index{16}, Index{64}}) {
    if (opts.quick && side > 16) continue;
    const auto v = make_wavelet_frame(side, max_wavelet_levels(side));
    worst = std::max(worst, tight_frame_residual(v, eng, 3));
    dot = std::max(dot, dot_test(v, {eng(), 0}));
  }
  std::ostringstream msg;
  msg << "worst |V V^T v - v| / |v| " << worst << ", dot test " << dot;
  return {"frame orthonormality", worst < 1e-10 && dot < 1e-10, msg.str(), 0.0};
}

SelftestCheck srm_check(const SelftestOptions& opts, Engine& eng) {
  const int count = opts.quick ? 5 : 20;
  double worst = 0.0, dot = 0.0;
  std::uniform_int_distribution<Index> n_dist(8, 256);
  for (int k = 0; k < count; ++k) {
    const Index n = n_dist(eng);
    std::uniform_int_distribution<Index> m_dist(1, n);
    const auto u = make_srm(m_dist(eng), n, {eng(), 0});
    worst = std::max(worst, tight_frame_residual(u, eng, 2));
    dot = std::max(dot, dot_test(u, {eng(), 1}));
  }
  std::ostringstream msg;
  msg << count << " operators, worst |U U^T u - u| / |u| " << worst << ", dot test " << dot;
  return {"SRM orthonormality", worst < 1e-10 && dot < 1e-10, msg.str(), 0.0};
}

SelftestCheck descent_check(const SelftestOptions& opts, Engine& eng) {
  const int instances = opts.quick ? 2 : 5;
  double worst = 0.0;
  int checked = 0;
  for (const auto& method : default_noiseless_methods()) {
    for (int k = 0; k < instances; ++k) {
      const Instance inst = gen_instance(60, 30, 6, eng(), 0.0);
      SolverConfig cfg = method.config;
      cfg.outer_max_iters = 100;
      cfg.max_total_outer_iters = 2000;
      const auto res = solve(inst.y, inst.a, cfg);
      const auto& rec = res.trace.records;
      for (size_t r = 1; r < rec.size(); ++r) {
        if (rec[r].phase != rec[r - 1].phase) continue;
        const double rise = (rec[r].objective - rec[r - 1].objective) / std::max(std::abs(rec[r - 1].objective), 1e-300);
        worst = std::max(worst, rise);
      }
      ++checked;
    }
  }
  std::ostringstream msg;
  msg << checked << " solves, worst relative rise within a phase " << worst;
  return {"monotone descent", worst <= 1e-10, msg.str(), 0.0};
}

}  // namespace

std::vector<SelftestCheck> run_selftest(const SelftestOptions& opts) {
  using Check = std::function<SelftestCheck(const SelftestOptions&, Engine&)>;
  const std::vector<Check> checks{shrinkage_check, gradient_check, frame_check, srm_check, descent_check};
  std::vector<SelftestCheck> out;
  for (size_t k = 0; k < checks.size(); ++k) {
    Engine eng = make_engine({opts.seed, k});
    const auto start = std::chrono::steady_clock::now();
    SelftestCheck c;
    try {
      c = checks[k](opts, eng);
    } catch (const std::exception& e) {
      c = {"check " + std::to_string(k), false, std::string("threw: ") + e.what(), 0.0};
    }
    c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out.push_back(std::move(c));
  }
  return out;
}

void print_selftest_table(std::ostream& os, const std::vector<SelftestCheck>& checks) {
  for (const auto& c : checks) {
    os << (c.passed ? "PASS " : "FAIL ") << std::left << std::setw(30) << c.name << std::right << std::fixed
       << std::setprecision(2) << std::setw(7) << c.seconds << "s  " << c.detail << '\n';
    os.unsetf(std::ios::floatfield);
  }
}

}  // namespace entromin
