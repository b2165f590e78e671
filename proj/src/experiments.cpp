#include "entromin/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <thread>

#include "entromin/config.hpp"
#include "entromin/random.hpp"
#include "entromin/wavelets.hpp"

namespace entromin {

namespace {

constexpr std::uint64_t kTagPhaseTransition = 1;
constexpr std::uint64_t kTagNoisy = 2;
constexpr std::uint64_t kTagNoisyDev = 3;
constexpr std::uint64_t kTagImage = 4;

// Runs body(0..count-1) on up to `threads` workers. Every index writes its own
// output slot, so the result does not depend on scheduling.
template <class Body>
void parallel_for(size_t count, int threads, Body body) {
  const size_t workers = std::min<size_t>(count, static_cast<size_t>(std::max(threads, 1)));
  if (workers <= 1) {
    for (size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (size_t i = next++; i < count; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = count;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

void report(const RunOptions& opts, const std::string& msg) {
  if (opts.progress) opts.progress(msg);
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

// Solves every method on one instance. The L1 initial points and the operator
// norm are shared between methods that would compute the same thing.
class InstanceSolver {
 public:
  InstanceSolver(const Vector& y, const LinearOperator& a) : y_(y), a_(a) {}

  double kappa() {
    if (!kappa_) kappa_ = estimate_kappa(a_);
    return *kappa_;
  }

  Vector solve(SolverConfig cfg) {
    if (!cfg.kappa) cfg.kappa = kappa();
    if (cfg.regularizer.kind() == RegularizerKind::L1) {
      if (cfg.initializer == Initializer::Provided) return entromin::solve(y_, a_, cfg).x;
      cfg.initializer = Initializer::Zero;
      return l1_solution(cfg);
    }
    if (cfg.initializer == Initializer::L1) {
      SolverConfig init = l1_initializer_config(cfg);
      cfg.initial_point = l1_solution(init);
      cfg.initializer = Initializer::Provided;
    }
    return entromin::solve(y_, a_, cfg).x;
  }

 private:
  const Vector& l1_solution(const SolverConfig& cfg) {
    const std::string key = to_json(cfg).dump();
    auto it = cache_.find(key);
    if (it == cache_.end()) it = cache_.emplace(key, entromin::solve(y_, a_, cfg).x).first;
    return it->second;
  }

  const Vector& y_;
  const LinearOperator& a_;
  std::optional<double> kappa_;
  std::map<std::string, Vector> cache_;
};

void check_fraction(double v, const char* what) {
  if (!(v > 0.0 && v < 1.0)) throw DomainError(std::string(what) + " must lie in (0, 1)");
}

void check_methods(const std::vector<Method>& methods) {
  if (methods.empty()) throw DomainError("at least one method is required");
  for (const auto& m : methods) {
    if (m.name.empty()) throw DomainError("method names must be non-empty");
    m.config.validate();
  }
  for (size_t i = 0; i < methods.size(); ++i) {
    for (size_t j = i + 1; j < methods.size(); ++j) {
      if (methods[i].name == methods[j].name) throw DomainError("duplicate method name '" + methods[i].name + "'");
    }
  }
}

size_t method_index(const std::vector<std::string>& names, const std::string& name) {
  const auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw DomainError("unknown method '" + name + "'");
  return static_cast<size_t>(it - names.begin());
}

std::string csv_double(double v) { return format_double(v); }

}  // namespace

void write_results_csv(std::ostream& os, const std::vector<TrialResult>& rows) {
  os << "experiment_id,method,sigma,rho_or_M,trial,seed,success,rel_err,snr_db,psnr_db,wall_ms\n";
  for (const auto& r : rows) {
    os << r.experiment_id << ',' << r.method << ',' << csv_double(r.sigma) << ',' << csv_double(r.rho_or_m) << ','
       << r.trial << ',' << r.seed << ',' << (r.success ? 1 : 0) << ',' << csv_double(r.rel_err) << ','
       << csv_double(r.snr_db) << ',' << (r.psnr_db ? csv_double(*r.psnr_db) : std::string()) << ','
       << csv_double(r.wall_ms) << '\n';
  }
}

Instance gen_instance(Index n, Index m, Index s, std::uint64_t seed, double nu) {
  if (s < 1 || s > m || m > n) throw DomainError("gen_instance: need 1 <= S <= M <= N");
  if (!(nu >= 0.0)) throw DomainError("gen_instance: nu must be nonnegative");
  Instance inst{Vector::Zero(n), make_gaussian(m, n, {seed, 0}), Vector(), Vector::Zero(m), 0.0};

  Engine eng = make_engine({seed, 1});
  std::vector<Index> idx(static_cast<size_t>(n));
  std::iota(idx.begin(), idx.end(), Index{0});
  // partial Fisher-Yates: the first s entries are a uniform s-subset
  for (Index i = 0; i < s; ++i) {
    std::uniform_int_distribution<Index> pick(i, n - 1);
    std::swap(idx[static_cast<size_t>(i)], idx[static_cast<size_t>(pick(eng))]);
  }
  const Vector values = gaussian_vector(eng, s);
  for (Index i = 0; i < s; ++i) inst.x(idx[static_cast<size_t>(i)]) = values(i);

  const Vector clean = inst.a.apply(inst.x);
  if (nu > 0.0) {
    Engine noise_eng = make_engine({seed, 2});
    inst.noise = nu * gaussian_vector(noise_eng, m);
  }
  inst.y = clean + inst.noise;
  inst.measurement_snr_db = measurement_snr_db(clean, inst.noise);
  return inst;
}

double nu_for_measurement_snr(Index n, Index s, double target_db) {
  if (n < 2 || s < 1) throw DomainError("nu_for_measurement_snr: need N >= 2 and S >= 1");
  // A centered unit-norm row has entries of variance 1/(N-1), so each clean
  // measurement carries S/(N-1) energy on average against nu^2 of noise.
  return std::sqrt(static_cast<double>(s) / (static_cast<double>(n - 1) * std::pow(10.0, target_db / 10.0)));
}

// ---------------------------------------------------------------------------

void ExperimentGrid::validate() const {
  if (n < 2) throw DomainError("grid: N must be at least 2");
  if (sigmas.empty() || rhos.empty()) throw DomainError("grid: sigma and rho lists must be non-empty");
  for (double s : sigmas) check_fraction(s, "grid: sigma");
  for (double r : rhos) check_fraction(r, "grid: rho");
  if (trials < 1) throw DomainError("grid: trials must be >= 1");
  if (!(success_threshold > 0.0)) throw DomainError("grid: success threshold must be positive");
  if (noise_scale != 0.0) throw DomainError("grid: the phase transition is noiseless (noise_scale must be 0)");
  check_methods(methods);
}

Index ExperimentGrid::measurements(size_t i) const {
  return std::max<Index>(1, static_cast<Index>(std::lround(sigmas.at(i) * static_cast<double>(n))));
}

Index ExperimentGrid::sparsity(size_t i, size_t j) const {
  const Index m = measurements(i);
  return std::clamp<Index>(static_cast<Index>(std::lround(rhos.at(j) * static_cast<double>(m))), 1, m);
}

const RateTable& PhaseTransitionResult::rates_for(const std::string& method) const {
  return rates.at(method_index(methods, method));
}

int PhaseTransitionResult::total_successes(const std::string& method) const {
  int total = 0;
  for (const auto& r : trials) total += (r.method == method && r.success) ? 1 : 0;
  return total;
}

std::uint64_t trial_seed(std::uint64_t master, std::uint64_t experiment_tag, size_t i, size_t j, int trial) {
  return derive_seed(master, {experiment_tag, i, j, static_cast<std::uint64_t>(trial)});
}

PhaseTransitionResult run_phase_transition(const ExperimentGrid& grid, const RunOptions& opts) {
  grid.validate();
  const size_t ns = grid.sigmas.size(), nr = grid.rhos.size(), nm = grid.methods.size();
  const size_t nt = static_cast<size_t>(grid.trials);

  PhaseTransitionResult out;
  out.sigmas = grid.sigmas;
  out.rhos = grid.rhos;
  for (const auto& m : grid.methods) out.methods.push_back(m.name);

  // unit u = ((i * nr + j) * nt + t); rows within a unit follow method order
  const size_t units = ns * nr * nt;
  std::vector<TrialResult> rows(units * nm);
  std::atomic<size_t> done{0};
  parallel_for(units, opts.threads, [&](size_t u) {
    const size_t t = u % nt, j = (u / nt) % nr, i = u / (nt * nr);
    const std::uint64_t seed = trial_seed(grid.master_seed, kTagPhaseTransition, i, j, static_cast<int>(t));
    const Instance inst = gen_instance(grid.n, grid.measurements(i), grid.sparsity(i, j), seed, 0.0);
    InstanceSolver solver(inst.y, inst.a);
    for (size_t k = 0; k < nm; ++k) {
      const auto start = std::chrono::steady_clock::now();
      const Vector xh = solver.solve(grid.methods[k].config);
      const double ms = elapsed_ms(start);
      const MetricReport mr = metrics(inst.x, xh);
      TrialResult& r = rows[u * nm + k];
      r.experiment_id = "ptc";
      r.method = grid.methods[k].name;
      r.sigma = grid.sigmas[i];
      r.rho_or_m = grid.rhos[j];
      r.trial = static_cast<int>(t);
      r.seed = seed;
      r.rel_err = mr.rel_err;
      r.success = mr.rel_err < grid.success_threshold;
      r.snr_db = mr.snr_db;
      r.wall_ms = opts.record_timing ? ms : 0.0;
    }
    const size_t finished = ++done;
    if (opts.progress && (finished % nt == 0 || finished == units)) {
      report(opts, "ptc: " + std::to_string(finished) + "/" + std::to_string(units) + " instances");
    }
  });

  std::vector<std::vector<std::vector<int>>> counts(nm, std::vector<std::vector<int>>(ns, std::vector<int>(nr, 0)));
  for (size_t u = 0; u < units; ++u) {
    const size_t j = (u / nt) % nr, i = u / (nt * nr);
    for (size_t k = 0; k < nm; ++k) counts[k][i][j] += rows[u * nm + k].success ? 1 : 0;
  }
  out.rates.assign(nm, RateTable(ns, std::vector<double>(nr, 0.0)));
  for (size_t k = 0; k < nm; ++k) {
    for (size_t i = 0; i < ns; ++i) {
      for (size_t j = 0; j < nr; ++j) out.rates[k][i][j] = static_cast<double>(counts[k][i][j]) / static_cast<double>(nt);
    }
  }
  out.trials = std::move(rows);
  return out;
}

std::vector<PtcPoint> extract_ptc(const std::vector<double>& sigmas, const std::vector<double>& rhos,
                                  const RateTable& rates) {
  if (rates.size() != sigmas.size()) throw DimensionError("extract_ptc: one rate row per sigma expected");
  if (rhos.empty()) throw DimensionError("extract_ptc: empty rho axis");
  for (size_t j = 1; j < rhos.size(); ++j) {
    if (!(rhos[j] > rhos[j - 1])) throw DomainError("extract_ptc: rho values must be increasing");
  }
  std::vector<PtcPoint> out;
  for (size_t i = 0; i < sigmas.size(); ++i) {
    const auto& col = rates[i];
    if (col.size() != rhos.size()) throw DimensionError("extract_ptc: ragged rate table");
    for (double r : col) {
      if (!(r >= 0.0 && r <= 1.0)) throw DomainError("extract_ptc: rates must lie in [0, 1]");
    }
    std::optional<double> crossing;
    for (size_t j = 0; j + 1 < col.size() && !crossing; ++j) {
      const double a = col[j] - 0.5, b = col[j + 1] - 0.5;
      if (a == 0.0) {
        crossing = rhos[j];
      } else if ((a > 0.0) != (b > 0.0) || b == 0.0) {
        crossing = rhos[j] + (rhos[j + 1] - rhos[j]) * a / (a - b);
      }
    }
    if (!crossing && col.back() == 0.5) crossing = rhos.back();
    if (crossing) {
      out.push_back({sigmas[i], *crossing, false});
    } else {
      // the whole column sits on one side of 0.5
      out.push_back({sigmas[i], col.front() > 0.5 ? rhos.back() : rhos.front(), true});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

void NoisySweepConfig::validate() const {
  if (sparsity < 1 || sparsity > n) throw DomainError("noisy: need 1 <= S <= N");
  if (!(nu >= 0.0)) throw DomainError("noisy: nu must be nonnegative");
  if (measurements.empty()) throw DomainError("noisy: measurement list must be non-empty");
  for (Index m : measurements) {
    if (m < sparsity || m > n) throw DomainError("noisy: every M must satisfy S <= M <= N");
  }
  if (trials < 1) throw DomainError("noisy: trials must be >= 1");
  check_methods(methods);
  bool needs_tuning = false;
  for (const auto& m : methods) needs_tuning = needs_tuning || !m.config.lambda0;
  if (needs_tuning && (dev_trials < 1 || lambda_grid.empty())) {
    throw DomainError("noisy: methods without lambda0 need dev_trials >= 1 and a lambda grid");
  }
  for (double l : lambda_grid) {
    if (!(l > 0.0)) throw DomainError("noisy: lambda grid values must be positive");
  }
}

double NoisySweepResult::mean_snr(const std::string& method, size_t m_index) const {
  return mean_snr_db.at(method_index(methods, method)).at(m_index);
}

namespace {

SolverConfig with_lambda(SolverConfig cfg, double lambda, std::optional<double> l1_lambda) {
  cfg.lambda0 = lambda;
  cfg.continuation_ratio.reset();
  if (cfg.regularizer.kind() != RegularizerKind::L1 && cfg.initializer == Initializer::L1 && !cfg.init_lambda) {
    cfg.init_lambda = l1_lambda ? *l1_lambda : lambda;
  }
  return cfg;
}

double mean_finite_snr(const std::vector<double>& v) {
  // exact recoveries are capped so one lucky trial cannot dominate the mean
  constexpr double cap = 300.0;
  double total = 0.0;
  for (double s : v) total += std::min(s, cap);
  return total / static_cast<double>(v.size());
}

}  // namespace

NoisySweepResult run_noisy_sweep(const NoisySweepConfig& cfg, const RunOptions& opts) {
  cfg.validate();
  const size_t nmeas = cfg.measurements.size(), nm = cfg.methods.size();
  const size_t nt = static_cast<size_t>(cfg.trials), nd = static_cast<size_t>(cfg.dev_trials);

  NoisySweepResult out;
  out.measurements = cfg.measurements;
  for (const auto& m : cfg.methods) out.methods.push_back(m.name);
  out.mean_snr_db.assign(nm, std::vector<double>(nmeas, 0.0));
  out.lambda_used.assign(nm, std::vector<double>(nmeas, 0.0));
  out.mean_measurement_snr_db.assign(nmeas, 0.0);

  // L1 methods are tuned first so the others can start from the tuned L1 point
  std::vector<size_t> order(nm);
  std::iota(order.begin(), order.end(), size_t{0});
  std::stable_partition(order.begin(), order.end(),
                        [&](size_t k) { return cfg.methods[k].config.regularizer.kind() == RegularizerKind::L1; });

  for (size_t c = 0; c < nmeas; ++c) {
    const Index m = cfg.measurements[c];
    std::vector<Instance> dev;
    for (size_t t = 0; t < nd; ++t) {
      dev.push_back(gen_instance(cfg.n, m, cfg.sparsity,
                                 trial_seed(cfg.master_seed, kTagNoisyDev, c, 0, static_cast<int>(t)), cfg.nu));
    }
    std::optional<double> l1_lambda;
    for (size_t k : order) {
      const auto& method = cfg.methods[k];
      double lambda = 0.0;
      if (method.config.lambda0) {
        lambda = *method.config.lambda0;
      } else {
        // mean SNR on the development instances, first best value wins ties
        const size_t ng = cfg.lambda_grid.size();
        std::vector<double> score(ng, 0.0);
        parallel_for(ng, opts.threads, [&](size_t g) {
          const SolverConfig sc = with_lambda(method.config, cfg.lambda_grid[g], l1_lambda);
          std::vector<double> snrs;
          for (const auto& inst : dev) {
            InstanceSolver solver(inst.y, inst.a);
            snrs.push_back(metrics(inst.x, solver.solve(sc)).snr_db);
          }
          score[g] = mean_finite_snr(snrs);
        });
        const size_t best = static_cast<size_t>(std::max_element(score.begin(), score.end()) - score.begin());
        lambda = cfg.lambda_grid[best];
        report(opts, "noisy: M=" + std::to_string(m) + " " + method.name + " lambda=" + format_double(lambda));
      }
      out.lambda_used[k][c] = lambda;
      if (method.config.regularizer.kind() == RegularizerKind::L1 && !l1_lambda) l1_lambda = lambda;
    }

    std::vector<TrialResult> rows(nt * nm);
    std::vector<double> msnr(nt, 0.0);
    parallel_for(nt, opts.threads, [&](size_t t) {
      const std::uint64_t seed = trial_seed(cfg.master_seed, kTagNoisy, c, 0, static_cast<int>(t));
      const Instance inst = gen_instance(cfg.n, m, cfg.sparsity, seed, cfg.nu);
      msnr[t] = inst.measurement_snr_db;
      InstanceSolver solver(inst.y, inst.a);
      for (size_t k = 0; k < nm; ++k) {
        const SolverConfig sc = with_lambda(cfg.methods[k].config, out.lambda_used[k][c], l1_lambda);
        const auto start = std::chrono::steady_clock::now();
        const Vector xh = solver.solve(sc);
        const double ms = elapsed_ms(start);
        const MetricReport mr = metrics(inst.x, xh);
        TrialResult& r = rows[t * nm + k];
        r.experiment_id = "noisy";
        r.method = cfg.methods[k].name;
        r.sigma = static_cast<double>(m) / static_cast<double>(cfg.n);
        r.rho_or_m = static_cast<double>(m);
        r.trial = static_cast<int>(t);
        r.seed = seed;
        r.rel_err = mr.rel_err;
        r.success = mr.rel_err < 1e-3;
        r.snr_db = mr.snr_db;
        r.wall_ms = opts.record_timing ? ms : 0.0;
      }
    });
    for (size_t k = 0; k < nm; ++k) {
      std::vector<double> snrs;
      for (size_t t = 0; t < nt; ++t) snrs.push_back(rows[t * nm + k].snr_db);
      out.mean_snr_db[k][c] = mean_finite_snr(snrs);
    }
    out.mean_measurement_snr_db[c] = std::accumulate(msnr.begin(), msnr.end(), 0.0) / static_cast<double>(nt);
    out.trials.insert(out.trials.end(), rows.begin(), rows.end());
    report(opts, "noisy: M=" + std::to_string(m) + " done");
  }
  return out;
}

// ---------------------------------------------------------------------------

void ImageExperimentConfig::validate() const {
  if (sigmas.empty()) throw DomainError("image: sigma list must be non-empty");
  for (double s : sigmas) {
    if (!(s > 0.0 && s <= 1.0)) throw DomainError("image: sigma must lie in (0, 1]");
  }
  if (noise_levels.empty()) throw DomainError("image: noise level list must be non-empty");
  for (double nu : noise_levels) {
    if (!(nu >= 0.0)) throw DomainError("image: noise levels must be nonnegative");
  }
  if (methods.empty()) throw DomainError("image: at least one method is required");
  for (const auto& m : methods) {
    if (!(m.config.lambda >= 0.0) || !(m.config.mu > 0.0)) throw DomainError("image: bad solver settings for " + m.name);
  }
  if (levels < 0) throw DomainError("image: levels must be >= 0");
}

double ImageRecoveryResult::psnr(size_t nu_index, const std::string& method, size_t sigma_index) const {
  return psnr_db.at(nu_index).at(method_index(methods, method)).at(sigma_index);
}

namespace {

void check_image(const GrayImage& image) {
  if (image.width != image.height || !is_power_of_two(image.width) || image.width < 8) {
    throw FormatError("image must be square with a power-of-two side of at least 8, got " +
                      std::to_string(image.width) + "x" + std::to_string(image.height));
  }
  check_length("image pixels", image.width * image.height, image.pixels.size());
}

}  // namespace

ImageRecoveryResult run_image_recovery(const GrayImage& image, const ImageExperimentConfig& cfg,
                                       const RunOptions& opts) {
  cfg.validate();
  check_image(image);
  const Index side = image.width, n = side * side;
  const int levels = cfg.levels > 0 ? cfg.levels : default_wavelet_levels(side);
  const LinearOperator frame = make_wavelet_frame(side, levels);
  const Vector s = image.pixels / 255.0;

  const size_t nn = cfg.noise_levels.size(), ns = cfg.sigmas.size(), nm = cfg.methods.size();
  ImageRecoveryResult out;
  out.sigmas = cfg.sigmas;
  out.noise_levels = cfg.noise_levels;
  for (const auto& m : cfg.methods) out.methods.push_back(m.name);
  out.psnr_db.assign(nn, std::vector<std::vector<double>>(nm, std::vector<double>(ns, 0.0)));
  out.measurement_snr_db.assign(nn, std::vector<double>(ns, 0.0));
  out.recovered.assign(nn, std::vector<std::vector<Vector>>(nm, std::vector<Vector>(ns)));

  // one work unit per (nu, sigma, method); the sensing draw only depends on (nu, sigma)
  const size_t units = nn * ns * nm;
  std::vector<TrialResult> rows(units);
  parallel_for(units, opts.threads, [&](size_t u) {
    const size_t k = u % nm, i = (u / nm) % ns, v = u / (nm * ns);
    const std::uint64_t seed = trial_seed(cfg.master_seed, kTagImage, v, i, 0);
    const Index m = std::clamp<Index>(static_cast<Index>(std::lround(cfg.sigmas[i] * static_cast<double>(n))), 1, n);
    const LinearOperator sensing = make_srm(m, n, {seed, 0});
    const Vector clean = sensing.apply(s);
    Vector noise = Vector::Zero(m);
    if (cfg.noise_levels[v] > 0.0) {
      Engine eng = make_engine({seed, 1});
      noise = cfg.noise_levels[v] * gaussian_vector(eng, m);
    }
    const auto start = std::chrono::steady_clock::now();
    const AnalysisResult res = solve_analysis_image(clean + noise, sensing, frame, cfg.methods[k].config);
    const double ms = elapsed_ms(start);
    // scored as an 8-bit image, like the input
    const Vector est = (255.0 * res.s).array().round().cwiseMax(0.0).cwiseMin(255.0).matrix();
    const MetricReport mr = metrics(image.pixels, est, 255.0);
    out.recovered[v][k][i] = est;
    out.psnr_db[v][k][i] = mr.psnr_db;
    if (k == 0) out.measurement_snr_db[v][i] = measurement_snr_db(clean, noise);
    TrialResult& r = rows[u];
    r.experiment_id = "image";
    r.method = cfg.methods[k].name;
    r.sigma = cfg.sigmas[i];
    r.rho_or_m = static_cast<double>(m);
    r.trial = static_cast<int>(v);
    r.seed = seed;
    r.rel_err = mr.rel_err;
    r.success = mr.rel_err < 1e-3;
    r.snr_db = mr.snr_db;
    r.psnr_db = mr.psnr_db;
    r.wall_ms = opts.record_timing ? ms : 0.0;
    report(opts, "image: nu=" + format_double(cfg.noise_levels[v]) + " sigma=" + format_double(cfg.sigmas[i]) + " " +
                     cfg.methods[k].name + " psnr=" + format_double(mr.psnr_db));
  });
  out.trials = std::move(rows);
  return out;
}

double nu_for_image_snr(const GrayImage& image, double target_db) {
  check_image(image);
  const Vector s = image.pixels / 255.0;
  const double rms = s.norm() / std::sqrt(static_cast<double>(s.size()));
  if (rms == 0.0) throw DomainError("nu_for_image_snr: image is all zero");
  // U has orthonormal rows, so E||U s||^2 = M ||s||^2 / N against M nu^2 of noise
  return rms * std::pow(10.0, -target_db / 20.0);
}

// ---------------------------------------------------------------------------

std::vector<Method> default_noiseless_methods() {
  std::vector<Method> out;
  out.push_back({"l1", SolverConfig{}});
  SolverConfig sef;
  sef.regularizer = RegularizerSpec::sef(1.1);
  out.push_back({"sef", sef});
  SolverConfig ref;
  ref.regularizer = RegularizerSpec::ref(1.1, 1.1);
  out.push_back({"ref", ref});
  SolverConfig lp;
  lp.regularizer = RegularizerSpec::lpp(0.5);
  out.push_back({"lp", lp});
  return out;
}

std::vector<Method> default_noisy_methods() {
  auto out = default_noiseless_methods();
  for (auto& m : out) m.config.continuation_ratio.reset();
  return out;
}

std::vector<ImageMethod> default_image_methods() {
  // weights picked by a coarse sweep on a 64x64 image at sigma = 0.3
  constexpr double l1_lambda = 0.03;
  std::vector<ImageMethod> out;
  AnalysisConfig l1;
  l1.lambda = l1_lambda;
  out.push_back({"l1", l1});
  AnalysisConfig sef;
  sef.regularizer = RegularizerSpec::sef(1.0);
  sef.lambda = 2.0;
  sef.init_l1_lambda = l1_lambda;
  out.push_back({"sef", sef});
  AnalysisConfig ref;
  ref.regularizer = RegularizerSpec::ref(0.9, 1.1);
  ref.lambda = 2.0;
  ref.init_l1_lambda = l1_lambda;
  out.push_back({"ref", ref});
  AnalysisConfig lp;
  lp.regularizer = RegularizerSpec::lpp(0.8);
  lp.lambda = 0.01;
  lp.init_l1_lambda = l1_lambda;
  out.push_back({"lp", lp});
  return out;
}

ExperimentGrid desk_phase_transition_grid() {
  ExperimentGrid g;
  g.n = 200;
  g.sigmas = {0.05, 0.15, 0.25, 0.35, 0.5, 0.65, 0.75, 0.85, 0.95};
  g.rhos = g.sigmas;
  g.trials = 20;
  g.methods = default_noiseless_methods();
  return g;
}

ExperimentGrid full_phase_transition_grid() {
  ExperimentGrid g;
  g.n = 1000;
  g.sigmas.clear();
  for (int k = 1; k <= 19; ++k) g.sigmas.push_back(0.05 * k);
  g.rhos = g.sigmas;
  g.trials = 100;
  g.methods = default_noiseless_methods();
  return g;
}

namespace {

std::vector<double> log_grid(double lo, double hi, int per_decade) {
  std::vector<double> out;
  const int steps = static_cast<int>(std::lround(std::log10(hi / lo) * per_decade));
  for (int k = 0; k <= steps; ++k) out.push_back(lo * std::pow(10.0, static_cast<double>(k) / per_decade));
  return out;
}

}  // namespace

NoisySweepConfig desk_noisy_sweep() {
  NoisySweepConfig c;
  c.n = 250;
  c.sparsity = 25;
  c.nu = nu_for_measurement_snr(c.n, c.sparsity, 25.0);
  for (double s : {0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9}) c.measurements.push_back(static_cast<Index>(std::lround(s * 250)));
  c.methods = default_noisy_methods();
  c.trials = 20;
  c.dev_trials = 10;
  c.lambda_grid = log_grid(1e-4, 10.0, 6);
  return c;
}

NoisySweepConfig full_noisy_sweep() {
  NoisySweepConfig c = desk_noisy_sweep();
  c.n = 1000;
  c.sparsity = 100;
  c.nu = 0.05;
  c.measurements.clear();
  for (int k = 2; k <= 9; ++k) c.measurements.push_back(100 * k);
  c.trials = 100;
  return c;
}

ImageExperimentConfig desk_image_experiment() {
  ImageExperimentConfig c;
  c.sigmas = {0.2, 0.3, 0.5};
  c.noise_levels = {0.0, 0.02};
  c.methods = default_image_methods();
  return c;
}

// ---------------------------------------------------------------------------

void write_ptc_csv(std::ostream& os, const PhaseTransitionResult& result) {
  os << "method,sigma,rho_half\n";
  for (size_t k = 0; k < result.methods.size(); ++k) {
    for (const auto& p : extract_ptc(result.sigmas, result.rhos, result.rates[k])) {
      os << result.methods[k] << ',' << csv_double(p.sigma) << ',' << csv_double(p.rho_half) << '\n';
    }
  }
}

void write_phase_transition_plot(std::ostream& os, const PhaseTransitionResult& result) {
  for (size_t k = 0; k < result.methods.size(); ++k) {
    os << "# method " << result.methods[k] << "\n# sigma rho success_rate\n";
    for (size_t i = 0; i < result.sigmas.size(); ++i) {
      for (size_t j = 0; j < result.rhos.size(); ++j) {
        os << csv_double(result.sigmas[i]) << ' ' << csv_double(result.rhos[j]) << ' '
           << csv_double(result.rates[k][i][j]) << '\n';
      }
      os << '\n';
    }
    os << "\n# contour " << result.methods[k] << "\n# sigma rho_half clamped\n";
    for (const auto& p : extract_ptc(result.sigmas, result.rhos, result.rates[k])) {
      os << csv_double(p.sigma) << ' ' << csv_double(p.rho_half) << ' ' << (p.clamped ? 1 : 0) << '\n';
    }
    os << "\n\n";
  }
}

void write_noisy_plot(std::ostream& os, const NoisySweepResult& result) {
  os << "# M measurement_snr_db";
  for (const auto& m : result.methods) os << ' ' << m;
  os << '\n';
  for (size_t c = 0; c < result.measurements.size(); ++c) {
    os << result.measurements[c] << ' ' << csv_double(result.mean_measurement_snr_db[c]);
    for (size_t k = 0; k < result.methods.size(); ++k) os << ' ' << csv_double(result.mean_snr_db[k][c]);
    os << '\n';
  }
}

void write_image_plot(std::ostream& os, const ImageRecoveryResult& result) {
  for (size_t v = 0; v < result.noise_levels.size(); ++v) {
    os << "# nu " << csv_double(result.noise_levels[v]) << "\n# sigma measurement_snr_db";
    for (const auto& m : result.methods) os << ' ' << m;
    os << '\n';
    for (size_t i = 0; i < result.sigmas.size(); ++i) {
      os << csv_double(result.sigmas[i]) << ' ' << csv_double(result.measurement_snr_db[v][i]);
      for (size_t k = 0; k < result.methods.size(); ++k) os << ' ' << csv_double(result.psnr_db[v][k][i]);
      os << '\n';
    }
    os << "\n\n";
  }
}

}  // namespace entromin
