#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "entromin/metrics.hpp"
#include "entromin/operators.hpp"
#include "entromin/pgm.hpp"
#include "entromin/solver.hpp"

namespace entromin {

struct Method {
  std::string name;
  SolverConfig config;
};

struct ImageMethod {
  std::string name;
  AnalysisConfig config;
};

struct RunOptions {
  int threads = 1;
  bool record_timing = false;  // wall_ms is written as 0 unless set
  std::function<void(const std::string&)> progress;
};

/// One row of the results CSV.
struct TrialResult {
  std::string experiment_id;
  std::string method;
  double sigma = 0.0;
  double rho_or_m = 0.0;
  int trial = 0;
  std::uint64_t seed = 0;
  bool success = false;
  double rel_err = 0.0;
  double snr_db = 0.0;
  std::optional<double> psnr_db;
  double wall_ms = 0.0;
};

void write_results_csv(std::ostream& os, const std::vector<TrialResult>& rows);

// ---------------------------------------------------------------------------
// Synthetic instances

struct Instance {
  Vector x;
  LinearOperator a;
  Vector y;
  Vector noise;  // nu * w
  double measurement_snr_db;
};

/// S-sparse x with N(0,1) nonzeros on a uniformly drawn support, Gaussian A
/// with centered unit-norm rows, y = A x + nu w.
Instance gen_instance(Index n, Index m, Index s, std::uint64_t seed, double nu);

/// Noise scale whose expected measurement SNR for gen_instance is target_db.
double nu_for_measurement_snr(Index n, Index s, double target_db);

// ---------------------------------------------------------------------------
// Noiseless phase transition

struct ExperimentGrid {
  Index n = 200;
  std::vector<double> sigmas;
  std::vector<double> rhos;
  int trials = 20;
  std::vector<Method> methods;
  std::uint64_t master_seed = 1;
  double success_threshold = 1e-3;
  double noise_scale = 0.0;

  void validate() const;
  Index measurements(size_t sigma_index) const;
  Index sparsity(size_t sigma_index, size_t rho_index) const;
};

/// rates[i_sigma][i_rho]
using RateTable = std::vector<std::vector<double>>;

struct PhaseTransitionResult {
  std::vector<double> sigmas;
  std::vector<double> rhos;
  std::vector<std::string> methods;
  std::vector<RateTable> rates;  // per method
  std::vector<TrialResult> trials;

  const RateTable& rates_for(const std::string& method) const;
  int total_successes(const std::string& method) const;
};

std::uint64_t trial_seed(std::uint64_t master, std::uint64_t experiment_tag, size_t i, size_t j, int trial);

PhaseTransitionResult run_phase_transition(const ExperimentGrid& grid, const RunOptions& opts = {});

struct PtcPoint {
  double sigma;
  double rho_half;
  bool clamped;
};

/// For each sigma, the lowest rho where the success rate crosses 0.5, by
/// linear interpolation; columns that never cross are clamped to the grid
/// edge and flagged.
std::vector<PtcPoint> extract_ptc(const std::vector<double>& sigmas, const std::vector<double>& rhos,
                                  const RateTable& rates);

// ---------------------------------------------------------------------------
// Noisy SNR sweep

struct NoisySweepConfig {
  Index n = 250;
  Index sparsity = 25;
  double nu = 0.05;
  std::vector<Index> measurements;
  std::vector<Method> methods;  // fixed lambda; lambda0 unset means tune on the dev set
  int trials = 20;
  std::uint64_t master_seed = 1;
  int dev_trials = 5;
  std::vector<double> lambda_grid;

  void validate() const;
};

struct NoisySweepResult {
  std::vector<Index> measurements;
  std::vector<std::string> methods;
  std::vector<std::vector<double>> mean_snr_db;    // [method][m]
  std::vector<std::vector<double>> lambda_used;    // [method][m]
  std::vector<double> mean_measurement_snr_db;     // [m]
  std::vector<TrialResult> trials;

  double mean_snr(const std::string& method, size_t m_index) const;
};

NoisySweepResult run_noisy_sweep(const NoisySweepConfig& cfg, const RunOptions& opts = {});

// ---------------------------------------------------------------------------
// Image recovery

struct ImageExperimentConfig {
  std::vector<double> sigmas;
  std::vector<double> noise_levels{0.0};  // nu on the [0, 1] intensity scale
  std::vector<ImageMethod> methods;
  int levels = 0;  // 0: default depth for the image side
  std::uint64_t master_seed = 1;

  void validate() const;
};

struct ImageRecoveryResult {
  std::vector<double> sigmas;
  std::vector<double> noise_levels;
  std::vector<std::string> methods;
  std::vector<std::vector<std::vector<double>>> psnr_db;  // [nu][method][sigma]
  std::vector<std::vector<double>> measurement_snr_db;    // [nu][sigma]
  std::vector<TrialResult> trials;
  std::vector<std::vector<std::vector<Vector>>> recovered;  // [nu][method][sigma], 0..255 scale

  double psnr(size_t nu_index, const std::string& method, size_t sigma_index) const;
};

/// Square power-of-two grayscale image; pixels are scaled to [0, 1] before
/// sensing and PSNR is reported on the 8-bit scale.
ImageRecoveryResult run_image_recovery(const GrayImage& image, const ImageExperimentConfig& cfg,
                                       const RunOptions& opts = {});

/// Noise scale giving an expected measurement SNR of target_db for an
/// orthonormal-row sensing of the [0, 1]-scaled image.
double nu_for_image_snr(const GrayImage& image, double target_db);

// ---------------------------------------------------------------------------
// Presets

std::vector<Method> default_noiseless_methods();
std::vector<Method> default_noisy_methods();
std::vector<ImageMethod> default_image_methods();

ExperimentGrid desk_phase_transition_grid();
ExperimentGrid full_phase_transition_grid();
NoisySweepConfig desk_noisy_sweep();
NoisySweepConfig full_noisy_sweep();
ImageExperimentConfig desk_image_experiment();

// ---------------------------------------------------------------------------
// Plot data (whitespace separated, gnuplot-friendly)

void write_ptc_csv(std::ostream& os, const PhaseTransitionResult& result);
void write_phase_transition_plot(std::ostream& os, const PhaseTransitionResult& result);
void write_noisy_plot(std::ostream& os, const NoisySweepResult& result);
void write_image_plot(std::ostream& os, const ImageRecoveryResult& result);

}  // namespace entromin
