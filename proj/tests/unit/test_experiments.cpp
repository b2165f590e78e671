#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "entromin/experiments.hpp"

using namespace entromin;

TEST_CASE("generated instances") {
  const auto inst = gen_instance(100, 40, 8, 5, 0.0);
  CHECK((inst.y - inst.a.apply(inst.x)).norm() == 0.0);
  Index nnz = 0;
  for (Index i = 0; i < 100; ++i) nnz += inst.x(i) != 0.0;
  CHECK(nnz == 8);
  const auto again = gen_instance(100, 40, 8, 5, 0.0);
  CHECK(again.x == inst.x);
  CHECK(again.y == inst.y);
  CHECK(again.a.to_dense() == inst.a.to_dense());
  const auto noisy = gen_instance(100, 40, 8, 5, 0.1);
  CHECK(noisy.x == inst.x);
  CHECK((noisy.y - noisy.a.apply(noisy.x) - noisy.noise).norm() < 1e-14);
  CHECK(gen_instance(100, 40, 8, 6, 0.0).x != inst.x);
  CHECK_THROWS_AS(gen_instance(100, 40, 41, 1, 0.0), DomainError);
  CHECK_THROWS_AS(gen_instance(100, 40, 8, 1, -1.0), DomainError);
}

TEST_CASE("noise level calibrated to a 25 dB measurement SNR") {
  for (Index m : {Index{250}, Index{500}, Index{900}}) {
    const double nu = nu_for_measurement_snr(1000, 100, 25.0);
    double sum = 0.0;
    for (std::uint64_t s = 0; s < 5; ++s) sum += gen_instance(1000, m, 100, 40 + s, nu).measurement_snr_db;
    CHECK(std::abs(sum / 5 - 25.0) < 2.0);
  }
  CHECK(std::abs(nu_for_measurement_snr(250, 25, 25.0) - 0.0178) < 1e-4);
}

TEST_CASE("metrics") {
  const Vector x = Vector::LinSpaced(10, 1.0, 10.0);
  const auto exact = metrics(x, x);
  CHECK(exact.rel_err == 0.0);
  CHECK(exact.exact);
  CHECK(std::isinf(exact.snr_db));
  const auto zero = metrics(x, Vector::Zero(10));
  CHECK(zero.rel_err == doctest::Approx(1.0));
  CHECK(std::abs(zero.snr_db) < 1e-12);
  Vector off = x;
  off(0) += 0.01 * x.norm();
  CHECK(std::abs(metrics(x, off).snr_db - 40.0) < 1e-9);
  const Vector img = Vector::Constant(4, 100.0);
  CHECK(std::abs(metrics(img, img + Vector::Constant(4, 1.0)).psnr_db - 20.0 * std::log10(255.0)) < 1e-9);
  CHECK_THROWS_AS(metrics(Vector::Zero(3), Vector::Ones(3)), DomainError);
  CHECK(std::abs(measurement_snr_db(Vector::Constant(4, 10.0), Vector::Constant(4, 1.0)) - 20.0) < 1e-12);
}

TEST_CASE("phase transition curve extraction") {
  const std::vector<double> sig{0.5};
  auto one = [&](std::vector<double> rhos, std::vector<double> col) {
    return extract_ptc(sig, rhos, RateTable{col}).front();
  };
  const auto mid = one({0.1, 0.2}, {1.0, 0.0});
  CHECK(std::abs(mid.rho_half - 0.15) < 1e-15);
  CHECK_FALSE(mid.clamped);
  const auto high = one({0.1, 0.2, 0.3}, {1.0, 1.0, 0.9});
  CHECK(high.rho_half == 0.3);
  CHECK(high.clamped);
  const auto low = one({0.1, 0.2, 0.3}, {0.4, 0.1, 0.0});
  CHECK(low.rho_half == 0.1);
  CHECK(low.clamped);
  // lowest crossing wins
  CHECK(std::abs(one({0.1, 0.2, 0.3, 0.4}, {1.0, 0.0, 1.0, 0.0}).rho_half - 0.15) < 1e-15);
  CHECK_THROWS_AS(one({0.2, 0.1}, {1.0, 0.0}), DomainError);
  CHECK_THROWS_AS(one({0.1, 0.2}, {1.2, 0.0}), DomainError);
  CHECK_THROWS_AS(one({0.1, 0.2}, {1.0}), DimensionError);
}

TEST_CASE("synthetic monotone rate field reproduces its contour within a cell") {
  // rate(sigma, rho) = logistic((c(sigma) - rho) * 40), contour rho = c(sigma)
  std::vector<double> sigmas, rhos;
  for (int i = 1; i <= 19; ++i) sigmas.push_back(0.05 * i);
  for (int j = 1; j <= 19; ++j) rhos.push_back(0.05 * j);
  auto contour = [](double s) { return 0.1 + 0.6 * s; };
  RateTable rates;
  for (double s : sigmas) {
    std::vector<double> col;
    for (double r : rhos) col.push_back(1.0 / (1.0 + std::exp(40.0 * (r - contour(s)))));
    rates.push_back(col);
  }
  const auto ptc = extract_ptc(sigmas, rhos, rates);
  for (size_t i = 0; i < sigmas.size(); ++i) {
    CHECK(std::abs(ptc[i].rho_half - contour(sigmas[i])) < 0.05);
    CHECK_FALSE(ptc[i].clamped);
  }
}

TEST_CASE("trial seeds are paired across methods and distinct across cells") {
  CHECK(trial_seed(1, 1, 2, 3, 4) == trial_seed(1, 1, 2, 3, 4));
  CHECK(trial_seed(1, 1, 2, 3, 4) != trial_seed(1, 1, 3, 2, 4));
  CHECK(trial_seed(1, 1, 2, 3, 4) != trial_seed(2, 1, 2, 3, 4));
}

TEST_CASE("small phase transition run is deterministic and thread independent") {
  ExperimentGrid g;
  g.n = 40;
  g.sigmas = {0.3, 0.8};
  g.rhos = {0.1, 0.9};
  g.trials = 3;
  g.methods = {{"l1", SolverConfig{}}};
  SolverConfig sef;
  sef.regularizer = RegularizerSpec::sef(1.1);
  g.methods.push_back({"sef", sef});
  auto csv = [&](int threads) {
    RunOptions o;
    o.threads = threads;
    const auto r = run_phase_transition(g, o);
    std::ostringstream os;
    write_results_csv(os, r.trials);
    write_ptc_csv(os, r);
    write_phase_transition_plot(os, r);
    return os.str();
  };
  const std::string a = csv(1);
  CHECK(a == csv(1));
  CHECK(a == csv(3));
  CHECK(a.rfind("experiment_id,method,sigma,rho_or_M,trial,seed,success,rel_err,snr_db,psnr_db,wall_ms\n", 0) == 0);
  const auto r = run_phase_transition(g);
  CHECK(r.trials.size() == 2u * 2u * 3u * 2u);
  CHECK(r.rates_for("sef")[1][0] == 1.0);
  CHECK_THROWS_AS(r.rates_for("lp"), DomainError);
  g.noise_scale = 0.1;
  CHECK_THROWS_AS(run_phase_transition(g), DomainError);
}

TEST_CASE("small noisy sweep tunes lambda and reports measurement SNR") {
  NoisySweepConfig c;
  c.n = 60;
  c.sparsity = 6;
  c.nu = nu_for_measurement_snr(60, 6, 25.0);
  c.measurements = {30};
  c.trials = 2;
  c.dev_trials = 2;
  c.lambda_grid = {1e-3, 1e-2, 1e-1};
  c.methods = default_noisy_methods();
  const auto r = run_noisy_sweep(c);
  REQUIRE(r.methods.size() == 4);
  for (size_t k = 0; k < 4; ++k) {
    CHECK(std::find(c.lambda_grid.begin(), c.lambda_grid.end(), r.lambda_used[k][0]) != c.lambda_grid.end());
    CHECK(std::isfinite(r.mean_snr_db[k][0]));
  }
  CHECK(r.mean_measurement_snr_db[0] > 18.0);
  CHECK(r.trials.size() == 8);
  std::ostringstream a, b;
  write_noisy_plot(a, r);
  write_noisy_plot(b, run_noisy_sweep(c));
  CHECK(a.str() == b.str());
}

TEST_CASE("image recovery at full sampling without penalty is exact") {
  GrayImage img;
  img.width = img.height = 16;
  img.pixels.resize(256);
  for (Index i = 0; i < 256; ++i) img.pixels(i) = static_cast<double>((i * 37) % 256);
  ImageExperimentConfig c;
  c.sigmas = {1.0};
  AnalysisConfig a;
  a.lambda = 0.0;
  c.methods = {{"l1", a}};
  const auto r = run_image_recovery(img, c);
  CHECK(std::isinf(r.psnr(0, "l1", 0)));
  GrayImage bad = img;
  bad.width = 8;
  bad.height = 32;
  CHECK_THROWS_AS(run_image_recovery(bad, c), FormatError);
}

TEST_CASE("presets are valid") {
  CHECK_NOTHROW(desk_phase_transition_grid().validate());
  CHECK_NOTHROW(full_phase_transition_grid().validate());
  CHECK_NOTHROW(desk_noisy_sweep().validate());
  CHECK_NOTHROW(full_noisy_sweep().validate());
  CHECK_NOTHROW(desk_image_experiment().validate());
  const auto g = desk_phase_transition_grid();
  CHECK(g.n == 200);
  CHECK(g.sigmas.size() == 9);
  CHECK(g.trials == 20);
  CHECK(g.measurements(4) == 100);
  CHECK(g.sparsity(4, 1) == 15);
  const auto p = full_phase_transition_grid();
  CHECK(p.n == 1000);
  CHECK(p.sigmas.size() == 19);
  CHECK(p.trials == 100);
}
