#pragma once

#include "entromin/common.hpp"

namespace entromin {

enum class MetricKind { RelErr, SNR, PSNR };

struct MetricReport {
  double rel_err = 0.0;
  double snr_db = 0.0;   // +inf on exact recovery
  double psnr_db = 0.0;  // +inf on exact recovery
  bool exact = false;
};

/// rel_err = ||x - xh|| / ||x||, snr = 20 log10(1 / rel_err),
/// psnr = 10 log10(peak^2 n / ||x - xh||^2). Throws if x is zero.
MetricReport metrics(VectorCRef x_true, VectorCRef x_hat, double peak = 255.0);

/// 20 log10(||clean|| / ||noise||) for a measurement split into signal and noise.
double measurement_snr_db(VectorCRef clean, VectorCRef noise);

}  // namespace entromin
