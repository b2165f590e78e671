#include "entromin/dct.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <mutex>

namespace entromin {

namespace {

// FFTW's planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwBuffer {
  explicit FftwBuffer(Index n) : data(static_cast<double*>(fftw_malloc(sizeof(double) * static_cast<size_t>(n)))) {
    if (!data) throw std::bad_alloc();
  }
  ~FftwBuffer() { fftw_free(data); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  double* data;
};

}  // namespace

struct OrthonormalDct::Plans {
  fftw_plan dct2 = nullptr;  // REDFT10
  fftw_plan dct3 = nullptr;  // REDFT01
};

OrthonormalDct::OrthonormalDct(Index n) : n_(n), plans_(std::make_unique<Plans>()) {
  if (n <= 0) throw DomainError("OrthonormalDct: length must be positive");
  FftwBuffer a(n), b(n);
  std::lock_guard lock(planner_mutex());
  const int len = static_cast<int>(n);
  plans_->dct2 = fftw_plan_r2r_1d(len, a.data, b.data, FFTW_REDFT10, FFTW_ESTIMATE);
  plans_->dct3 = fftw_plan_r2r_1d(len, a.data, b.data, FFTW_REDFT01, FFTW_ESTIMATE);
  if (!plans_->dct2 || !plans_->dct3) throw Error("OrthonormalDct: FFTW planning failed");
}

OrthonormalDct::~OrthonormalDct() {
  std::lock_guard lock(planner_mutex());
  if (plans_->dct2) fftw_destroy_plan(plans_->dct2);
  if (plans_->dct3) fftw_destroy_plan(plans_->dct3);
}

// REDFT10 computes Y_k = 2 sum_j x_j cos(pi (j + 1/2) k / n); the orthonormal
// DCT-II scales bin 0 by sqrt(1/n) and the rest by sqrt(2/n).
void OrthonormalDct::forward(std::span<const double> in, std::span<double> out) const {
  check_length("OrthonormalDct::forward input", n_, static_cast<Index>(in.size()));
  check_length("OrthonormalDct::forward output", n_, static_cast<Index>(out.size()));
  FftwBuffer a(n_), b(n_);
  std::memcpy(a.data, in.data(), sizeof(double) * in.size());
  fftw_execute_r2r(plans_->dct2, a.data, b.data);
  const double n = static_cast<double>(n_);
  const double c0 = 0.5 * std::sqrt(1.0 / n);
  const double ck = 0.5 * std::sqrt(2.0 / n);
  out[0] = b.data[0] * c0;
  for (Index k = 1; k < n_; ++k) out[k] = b.data[k] * ck;
}

// REDFT01 computes Y_j = X_0 + 2 sum_{k>=1} X_k cos(pi k (j + 1/2) / n).
void OrthonormalDct::inverse(std::span<const double> in, std::span<double> out) const {
  check_length("OrthonormalDct::inverse input", n_, static_cast<Index>(in.size()));
  check_length("OrthonormalDct::inverse output", n_, static_cast<Index>(out.size()));
  FftwBuffer a(n_), b(n_);
  const double n = static_cast<double>(n_);
  a.data[0] = in[0] * std::sqrt(1.0 / n);
  const double ck = 0.5 * std::sqrt(2.0 / n);
  for (Index k = 1; k < n_; ++k) a.data[k] = in[k] * ck;
  fftw_execute_r2r(plans_->dct3, a.data, b.data);
  std::memcpy(out.data(), b.data, sizeof(double) * out.size());
}

}  // namespace entromin
