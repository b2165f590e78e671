#include "entromin/wavelets.hpp"

#include <array>
#include <vector>

namespace entromin {

namespace {

// Reconstruction lowpass taps, double precision.
constexpr std::array<double, 2> kDb1 = {0.7071067811865476, 0.7071067811865476};
constexpr std::array<double, 4> kDb2 = {0.48296291314453416, 0.8365163037378079, 0.2241438680420134,
                                        -0.12940952255126037};
constexpr std::array<double, 6> kDb3 = {0.33267055295008263, 0.8068915093110925,  0.45987750211849154,
                                        -0.13501102001025458, -0.08544127388202666, 0.03522629188570953};
constexpr std::array<double, 8> kDb4 = {0.2303778133088965,   0.7148465705529157,   0.6308807679298589,
                                        -0.027983769416859854, -0.18703481171909309, 0.030841381835560764,
                                        0.0328830116668852,    -0.010597401785069032};

}  // namespace

std::span<const double> daubechies_lowpass(int order) {
  switch (order) {
    case 1: return kDb1;
    case 2: return kDb2;
    case 3: return kDb3;
    case 4: return kDb4;
    default: throw DomainError("daubechies_lowpass: order must be in 1..4, got " + std::to_string(order));
  }
}

Vector daubechies_highpass(int order) {
  const auto h = daubechies_lowpass(order);
  const auto len = static_cast<Index>(h.size());
  Vector g(len);
  for (Index j = 0; j < len; ++j) g[j] = ((j % 2) ? -1.0 : 1.0) * h[static_cast<size_t>(len - 1 - j)];
  return g;
}

bool is_power_of_two(Index n) { return n > 0 && (n & (n - 1)) == 0; }

int log2_exact(Index n) {
  int k = 0;
  while ((Index{1} << k) < n) ++k;
  return k;
}

int max_wavelet_levels(Index side) { return log2_exact(side) - 2; }

int default_wavelet_levels(Index side) { return side >= 256 ? 4 : max_wavelet_levels(side); }

PeriodicDwt2::PeriodicDwt2(int order, Index side, int levels)
    : order_(order), side_(side), levels_(levels), lo_(daubechies_lowpass(order)), hi_(daubechies_highpass(order)) {
  if (!is_power_of_two(side)) throw DomainError("PeriodicDwt2: side must be a power of two, got " + std::to_string(side));
  if (levels < 1 || levels > max_wavelet_levels(side)) {
    throw DomainError("PeriodicDwt2: levels must be in 1.." + std::to_string(max_wavelet_levels(side)) + " for side " +
                      std::to_string(side) + ", got " + std::to_string(levels));
  }
}

// a_k = sum_j h_j x_{(2k+j) mod n}, d_k = sum_j g_j x_{(2k+j) mod n}.
// Approximations land in out[0 .. n/2), details in out[n/2 .. n).
void PeriodicDwt2::analyze_1d(const double* in, double* out, Index n, Index stride_in, Index stride_out) const {
  const Index half = n / 2;
  const auto len = static_cast<Index>(lo_.size());
  for (Index k = 0; k < half; ++k) {
    double a = 0.0, d = 0.0;
    for (Index j = 0; j < len; ++j) {
      const double x = in[((2 * k + j) % n) * stride_in];
      a += lo_[static_cast<size_t>(j)] * x;
      d += hi_[j] * x;
    }
    out[k * stride_out] = a;
    out[(half + k) * stride_out] = d;
  }
}

void PeriodicDwt2::synthesize_1d(const double* in, double* out, Index n, Index stride_in, Index stride_out) const {
  const Index half = n / 2;
  const auto len = static_cast<Index>(lo_.size());
  for (Index i = 0; i < n; ++i) out[i * stride_out] = 0.0;
  for (Index k = 0; k < half; ++k) {
    const double a = in[k * stride_in];
    const double d = in[(half + k) * stride_in];
    for (Index j = 0; j < len; ++j) {
      out[((2 * k + j) % n) * stride_out] += lo_[static_cast<size_t>(j)] * a + hi_[j] * d;
    }
  }
}

Vector PeriodicDwt2::analyze(VectorCRef image) const {
  check_length("PeriodicDwt2::analyze", side_ * side_, image.size());
  Vector c = image;
  std::vector<double> line(static_cast<size_t>(side_));
  Index n = side_;
  for (int level = 0; level < levels_; ++level, n /= 2) {
    for (Index r = 0; r < n; ++r) {
      double* row = c.data() + r * side_;
      analyze_1d(row, line.data(), n, 1, 1);
      std::copy(line.begin(), line.begin() + n, row);
    }
    for (Index col = 0; col < n; ++col) {
      double* column = c.data() + col;
      analyze_1d(column, line.data(), n, side_, 1);
      for (Index r = 0; r < n; ++r) column[r * side_] = line[static_cast<size_t>(r)];
    }
  }
  return c;
}

Vector PeriodicDwt2::synthesize(VectorCRef coeffs) const {
  check_length("PeriodicDwt2::synthesize", side_ * side_, coeffs.size());
  Vector s = coeffs;
  std::vector<double> line(static_cast<size_t>(side_));
  Index n = side_ >> (levels_ - 1);
  for (int level = levels_ - 1; level >= 0; --level, n *= 2) {
    for (Index col = 0; col < n; ++col) {
      double* column = s.data() + col;
      synthesize_1d(column, line.data(), n, side_, 1);
      for (Index r = 0; r < n; ++r) column[r * side_] = line[static_cast<size_t>(r)];
    }
    for (Index r = 0; r < n; ++r) {
      double* row = s.data() + r * side_;
      synthesize_1d(row, line.data(), n, 1, 1);
      std::copy(line.begin(), line.begin() + n, row);
    }
  }
  return s;
}

}  // namespace entromin
