#pragma once

#include <span>

#include "entromin/common.hpp"

namespace entromin {

/// Orthonormal Daubechies lowpass (scaling) filter with `order` vanishing
/// moments, order in 1..4 (Db1 is Haar). Taps sum to sqrt(2).
std::span<const double> daubechies_lowpass(int order);

/// Quadrature-mirror highpass built from the lowpass: g[j] = (-1)^j h[L-1-j].
Vector daubechies_highpass(int order);

/// Separable 2-D periodized orthonormal DWT on square side x side images,
/// stored row-major. Coefficients use the Mallat layout: after each level the
/// approximation sits in the top-left quadrant of the previous block.
class PeriodicDwt2 {
 public:
  PeriodicDwt2(int order, Index side, int levels);

  int order() const { return order_; }
  Index side() const { return side_; }
  int levels() const { return levels_; }

  /// Image -> coefficients.
  Vector analyze(VectorCRef image) const;
  /// Coefficients -> image. Exact inverse (and transpose) of analyze.
  Vector synthesize(VectorCRef coeffs) const;

 private:
  void analyze_1d(const double* in, double* out, Index n, Index stride_in, Index stride_out) const;
  void synthesize_1d(const double* in, double* out, Index n, Index stride_in, Index stride_out) const;

  int order_;
  Index side_;
  int levels_;
  std::span<const double> lo_;
  Vector hi_;
};

bool is_power_of_two(Index n);
int log2_exact(Index n);

/// Largest admissible decomposition depth: coarsest band keeps >= 4 samples.
int max_wavelet_levels(Index side);
/// 4 for sides >= 256, otherwise the maximum admissible depth.
int default_wavelet_levels(Index side);

}  // namespace entromin
