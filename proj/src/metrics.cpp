#include "entromin/metrics.hpp"

#include <cmath>
#include <limits>

namespace entromin {

MetricReport metrics(VectorCRef x_true, VectorCRef x_hat, double peak) {
  check_length("metrics", x_true.size(), x_hat.size());
  const double norm = x_true.norm();
  if (norm == 0.0) throw DomainError("metrics: relative error undefined for a zero reference signal");
  const double err2 = (x_true - x_hat).squaredNorm();
  MetricReport r;
  r.rel_err = std::sqrt(err2) / norm;
  r.exact = err2 == 0.0;
  constexpr double inf = std::numeric_limits<double>::infinity();
  r.snr_db = r.exact ? inf : -20.0 * std::log10(r.rel_err);
  r.psnr_db = r.exact ? inf : 10.0 * std::log10(peak * peak * static_cast<double>(x_true.size()) / err2);
  return r;
}

double measurement_snr_db(VectorCRef clean, VectorCRef noise) {
  check_length("measurement_snr_db", clean.size(), noise.size());
  const double n = noise.norm();
  if (n == 0.0) return std::numeric_limits<double>::infinity();
  return 20.0 * std::log10(clean.norm() / n);
}

}  // namespace entromin
