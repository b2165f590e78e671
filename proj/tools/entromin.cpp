// Command-line front end: single solves, the three experiment families and
// the installation self-test.

#include <CLI11.hpp>

#include <bit>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "entromin/config.hpp"
#include "entromin/experiments.hpp"
#include "entromin/pgm.hpp"
#include "entromin/selftest.hpp"

namespace fs = std::filesystem;
using namespace entromin;

namespace {

constexpr int kExitSelftest = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

// Raised while reading and validating the run configuration (exit 2).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CommonArgs {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  int threads = 1;
  std::string scale = "desk";
  std::string method;
  std::optional<double> p, alpha, lambda, nu;
  std::vector<double> sigma;
  std::string input;
  bool record_timing = false;
};

struct SolveArgs {
  Index n = 200, m = 100, sparsity = 10;
  std::string op = "gaussian";
  std::string operator_file;
};

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  try {
    json j = json::parse(in);
    // a run manifest can be fed back in as a config
    if (j.is_object() && j.contains("subcommand") && j.contains("config")) return j["config"];
    return j;
  } catch (const json::parse_error& e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
}

json section(const json& cfg, const char* key) {
  if (!cfg.is_object()) throw ConfigError("config: expected a JSON object");
  return cfg.contains(key) ? cfg[key] : json::object();
}

void allow_keys(const json& cfg, std::initializer_list<const char*> keys) {
  if (cfg.is_null()) return;
  if (!cfg.is_object()) throw ConfigError("config: expected a JSON object");
  for (const auto& [k, _] : cfg.items()) {
    if (std::find_if(keys.begin(), keys.end(), [&](const char* x) { return k == x; }) == keys.end()) {
      throw ConfigError("config: unknown key '" + k + "'");
    }
  }
}

fs::path output_dir(const CommonArgs& args) {
  std::string dir = args.out;
  if (dir.empty()) {
    const char* env = std::getenv("ENTROMIN_OUT");
    dir = env && *env ? env : "entromin_out";
  }
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw ConfigError("cannot create output directory '" + dir + "'");
  const fs::path probe = fs::path(dir) / ".entromin_write_probe";
  {
    std::ofstream test(probe);
    if (!test) throw ConfigError("output directory '" + dir + "' is not writable");
  }
  fs::remove(probe, ec);
  return dir;
}

void write_text(const fs::path& path, const std::function<void(std::ostream&)>& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  body(out);
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

void write_f64(const fs::path& path, const Vector& v) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  for (Index i = 0; i < v.size(); ++i) {
    auto bits = std::bit_cast<std::uint64_t>(v(i));
    if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
    out.write(reinterpret_cast<const char*>(&bits), sizeof bits);
  }
}

Vector read_f64(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open measurement file '" + path + "'");
  std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (bytes.size() % 8 != 0) throw ConfigError("measurement file '" + path + "' is not a whole number of float64 values");
  Vector v(static_cast<Index>(bytes.size() / 8));
  for (Index i = 0; i < v.size(); ++i) {
    std::uint64_t bits;
    std::memcpy(&bits, bytes.data() + 8 * i, 8);
    if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
    v(i) = std::bit_cast<double>(bits);
  }
  return v;
}

json manifest(const std::string& sub, const CommonArgs& args, std::uint64_t seed, const json& config) {
  json j;
  j["tool"] = "entromin";
  j["version"] = version();
  j["subcommand"] = sub;
  j["master_seed"] = seed;
  j["threads"] = args.threads;
  j["config"] = config;
  return j;
}

RunOptions run_options(const CommonArgs& args) {
  RunOptions o;
  o.threads = args.threads;
  o.record_timing = args.record_timing;
  o.progress = [](const std::string& msg) { std::cerr << msg << '\n'; };
  return o;
}

std::vector<std::string> split_names(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string part; std::getline(ss, part, ',');) {
    if (!part.empty()) out.push_back(part);
  }
  return out;
}

template <class M>
std::vector<M> select_methods(const std::vector<M>& all, const std::string& filter) {
  if (filter.empty()) return all;
  std::vector<M> out;
  for (const auto& name : split_names(filter)) {
    auto it = std::find_if(all.begin(), all.end(), [&](const M& m) { return m.name == name; });
    if (it == all.end()) throw ConfigError("unknown method '" + name + "'");
    out.push_back(*it);
  }
  return out;
}

RegularizerSpec regularizer_from_flags(const CommonArgs& args, const RegularizerSpec& base) {
  RegularizerKind kind = base.kind();
  if (!args.method.empty()) kind = regularizer_kind_from_string(args.method);
  double p = args.p.value_or(kind == base.kind() ? base.p() : (kind == RegularizerKind::LpP ? 0.5 : 1.1));
  double alpha = args.alpha.value_or(kind == base.kind() && kind == RegularizerKind::REF ? base.alpha() : 1.1);
  if (kind == RegularizerKind::L1) p = 1.0;
  return RegularizerSpec::make(kind, p, alpha, base.epsilon());
}

// ---------------------------------------------------------------------------

int cmd_solve(const CommonArgs& args, const SolveArgs& sargs) {
  // configuration stage
  json cfg = args.config.empty() ? json::object() : read_json_file(args.config);
  allow_keys(cfg, {"solver", "instance", "operator", "measurements"});
  SolverConfig solver;
  json inst_json = section(cfg, "instance");
  allow_keys(inst_json, {"n", "m", "sparsity", "seed", "nu", "operator"});
  std::optional<Instance> inst;
  LinearOperator op = make_identity(1);
  Vector y;
  std::uint64_t seed = 1;
  try {
    solver = solver_config_from_json(section(cfg, "solver"));
    solver.regularizer = regularizer_from_flags(args, solver.regularizer);
    if (args.lambda) {
      solver.lambda0 = *args.lambda;
      solver.continuation_ratio.reset();
    }
    solver.validate();

    const bool from_files = cfg.contains("operator") || !sargs.operator_file.empty() || !args.input.empty();
    if (from_files) {
      json op_json = cfg.contains("operator") ? cfg["operator"] : json();
      if (!sargs.operator_file.empty()) op_json = read_json_file(sargs.operator_file);
      if (op_json.is_null()) throw ConfigError("solve: measurements given without an operator manifest");
      op = rebuild(operator_descriptor_from_json(op_json));
      const std::string ypath = !args.input.empty() ? args.input : cfg.value("measurements", std::string());
      if (ypath.empty()) throw ConfigError("solve: operator given without --input measurements");
      y = read_f64(ypath);
      check_length("solve: measurements", op.rows(), y.size());
      cfg["operator"] = to_json(op.descriptor());
      cfg["measurements"] = ypath;
      cfg.erase("instance");
    } else {
      const Index n = inst_json.value("n", sargs.n), m = inst_json.value("m", sargs.m);
      const Index s = inst_json.value("sparsity", sargs.sparsity);
      seed = args.seed.value_or(inst_json.value("seed", std::uint64_t{1}));
      const double nu = args.nu.value_or(inst_json.value("nu", 0.0));
      const std::string kind = inst_json.value("operator", sargs.op);
      if (kind == "gaussian") {
        inst = gen_instance(n, m, s, seed, nu);
      } else if (kind == "srm") {
        // same sparse signal, orthonormal-row operator
        Instance g = gen_instance(n, std::max(m, s), s, seed, 0.0);
        g.a = make_srm(m, n, {seed, 3});
        const Vector clean = g.a.apply(g.x);
        g.noise = Vector::Zero(m);
        if (nu > 0.0) {
          Engine eng = make_engine({seed, 2});
          g.noise = nu * gaussian_vector(eng, m);
        }
        g.y = clean + g.noise;
        g.measurement_snr_db = measurement_snr_db(clean, g.noise);
        inst = std::move(g);
      } else {
        throw ConfigError("solve: unknown operator kind '" + kind + "' (gaussian or srm)");
      }
      op = inst->a;
      y = inst->y;
      cfg["instance"] = {{"n", n}, {"m", m}, {"sparsity", s}, {"seed", seed}, {"nu", nu}, {"operator", kind}};
    }
    cfg["solver"] = to_json(solver);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(e.what());
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  const fs::path dir = output_dir(args);

  // compute stage
  const SolveResult res = solve(y, op, solver);
  write_f64(dir / "x_hat.f64", res.x);
  json header{{"dtype", "float64"}, {"byte_order", "little"}, {"length", res.x.size()}, {"file", "x_hat.f64"}};
  json summary{{"kappa", res.trace.kappa}, {"phases", res.trace.phases}, {"outer_iters", res.trace.total_outer_iters}};
  if (inst) {
    const MetricReport mr = metrics(inst->x, res.x);
    summary["rel_err"] = mr.rel_err;
    summary["snr_db"] = format_double(mr.snr_db);
    summary["measurement_snr_db"] = format_double(inst->measurement_snr_db);
    std::cout << "rel_err " << format_double(mr.rel_err) << "\nsnr_db " << format_double(mr.snr_db) << '\n';
  }
  header["summary"] = summary;
  write_text(dir / "x_hat.json", [&](std::ostream& os) { os << header.dump(2) << '\n'; });
  write_text(dir / "trace.csv", [&](std::ostream& os) { res.trace.write_csv(os); });
  json man = manifest("solve", args, seed, cfg);
  man["summary"] = summary;
  write_text(dir / "manifest.json", [&](std::ostream& os) { os << man.dump(2) << '\n'; });
  std::cout << "kappa " << format_double(res.trace.kappa) << "\nouter_iters " << res.trace.total_outer_iters
            << "\nwrote " << (dir / "x_hat.f64").string() << '\n';
  return 0;
}

int cmd_ptc(const CommonArgs& args) {
  ExperimentGrid grid;
  json cfg;
  try {
    json file = args.config.empty() ? json::object() : read_json_file(args.config);
    allow_keys(file, {"grid"});
    const ExperimentGrid base = args.scale == "paper" ? full_phase_transition_grid() : desk_phase_transition_grid();
    grid = experiment_grid_from_json(section(file, "grid"), base);
    if (args.seed) grid.master_seed = *args.seed;
    grid.methods = select_methods(grid.methods, args.method);
    if (!args.sigma.empty()) grid.sigmas = args.sigma;
    grid.validate();
    cfg["grid"] = to_json(grid);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  const fs::path dir = output_dir(args);

  const auto res = run_phase_transition(grid, run_options(args));
  write_text(dir / "results.csv", [&](std::ostream& os) { write_results_csv(os, res.trials); });
  write_text(dir / "ptc.csv", [&](std::ostream& os) { write_ptc_csv(os, res); });
  write_text(dir / "ptc.dat", [&](std::ostream& os) { write_phase_transition_plot(os, res); });
  json summary = json::object();
  std::cout << "method  successes / runs\n";
  const int runs = static_cast<int>(grid.sigmas.size() * grid.rhos.size()) * grid.trials;
  for (const auto& m : res.methods) {
    summary[m] = res.total_successes(m);
    std::cout << m << "  " << res.total_successes(m) << " / " << runs << '\n';
  }
  json man = manifest("ptc", args, grid.master_seed, cfg);
  man["summary"] = {{"total_successes", summary}};
  write_text(dir / "manifest.json", [&](std::ostream& os) { os << man.dump(2) << '\n'; });
  return 0;
}

int cmd_noisy(const CommonArgs& args) {
  NoisySweepConfig sweep;
  json cfg;
  try {
    json file = args.config.empty() ? json::object() : read_json_file(args.config);
    allow_keys(file, {"sweep"});
    const NoisySweepConfig base = args.scale == "paper" ? full_noisy_sweep() : desk_noisy_sweep();
    sweep = noisy_sweep_from_json(section(file, "sweep"), base);
    if (args.seed) sweep.master_seed = *args.seed;
    if (args.nu) sweep.nu = *args.nu;
    sweep.methods = select_methods(sweep.methods, args.method);
    if (args.lambda) {
      for (auto& m : sweep.methods) m.config.lambda0 = *args.lambda;
    }
    if (!args.sigma.empty()) {
      sweep.measurements.clear();
      for (double s : args.sigma) sweep.measurements.push_back(static_cast<Index>(std::lround(s * sweep.n)));
    }
    sweep.validate();
    cfg["sweep"] = to_json(sweep);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  const fs::path dir = output_dir(args);

  const auto res = run_noisy_sweep(sweep, run_options(args));
  write_text(dir / "results.csv", [&](std::ostream& os) { write_results_csv(os, res.trials); });
  write_text(dir / "noisy.dat", [&](std::ostream& os) { write_noisy_plot(os, res); });
  json summary;
  summary["measurement_snr_db"] = res.mean_measurement_snr_db;
  std::cout << "M  meas_snr";
  for (const auto& m : res.methods) std::cout << "  " << m;
  std::cout << '\n';
  for (size_t c = 0; c < res.measurements.size(); ++c) {
    std::cout << res.measurements[c] << "  " << format_double(res.mean_measurement_snr_db[c]);
    for (size_t k = 0; k < res.methods.size(); ++k) std::cout << "  " << format_double(res.mean_snr_db[k][c]);
    std::cout << '\n';
  }
  for (size_t k = 0; k < res.methods.size(); ++k) {
    summary["mean_snr_db"][res.methods[k]] = res.mean_snr_db[k];
    summary["lambda"][res.methods[k]] = res.lambda_used[k];
  }
  json man = manifest("noisy", args, sweep.master_seed, cfg);
  man["summary"] = summary;
  write_text(dir / "manifest.json", [&](std::ostream& os) { os << man.dump(2) << '\n'; });
  return 0;
}

int cmd_image(const CommonArgs& args) {
  ImageExperimentConfig exp;
  GrayImage image;
  json cfg;
  try {
    json file = args.config.empty() ? json::object() : read_json_file(args.config);
    allow_keys(file, {"input", "experiment"});
    exp = image_experiment_from_json(section(file, "experiment"), desk_image_experiment());
    if (args.seed) exp.master_seed = *args.seed;
    if (!args.sigma.empty()) exp.sigmas = args.sigma;
    if (args.nu) exp.noise_levels = {*args.nu};
    exp.methods = select_methods(exp.methods, args.method);
    if (args.lambda) {
      for (auto& m : exp.methods) m.config.lambda = *args.lambda;
    }
    exp.validate();
    const std::string input = !args.input.empty() ? args.input : file.value("input", std::string());
    if (input.empty()) throw ConfigError("image: an --input PGM is required");
    image = read_pgm(input);
    if (image.width != image.height) image = crop_square(image, std::min(image.width, image.height));
    cfg["input"] = input;
    cfg["experiment"] = to_json(exp);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  const fs::path dir = output_dir(args);

  const auto res = run_image_recovery(image, exp, run_options(args));
  write_text(dir / "results.csv", [&](std::ostream& os) { write_results_csv(os, res.trials); });
  write_text(dir / "image.dat", [&](std::ostream& os) { write_image_plot(os, res); });
  json summary;
  std::cout << "nu  sigma  meas_snr";
  for (const auto& m : res.methods) std::cout << "  " << m;
  std::cout << '\n';
  for (size_t v = 0; v < res.noise_levels.size(); ++v) {
    for (size_t i = 0; i < res.sigmas.size(); ++i) {
      std::cout << format_double(res.noise_levels[v]) << "  " << format_double(res.sigmas[i]) << "  "
                << format_double(res.measurement_snr_db[v][i]);
      for (size_t k = 0; k < res.methods.size(); ++k) {
        std::cout << "  " << format_double(res.psnr_db[v][k][i]);
        GrayImage rec{image.width, image.height, res.recovered[v][k][i]};
        write_pgm(dir / ("recovered_nu" + std::to_string(v) + "_s" + std::to_string(i) + "_" + res.methods[k] + ".pgm"),
                  rec);
      }
      std::cout << '\n';
    }
  }
  for (size_t k = 0; k < res.methods.size(); ++k) {
    json per_nu = json::array();
    for (size_t v = 0; v < res.noise_levels.size(); ++v) {
      json row = json::array();
      for (double p : res.psnr_db[v][k]) row.push_back(format_double(p));
      per_nu.push_back(row);
    }
    summary["psnr_db"][res.methods[k]] = per_nu;
  }
  json msnr = json::array();
  for (const auto& row : res.measurement_snr_db) {
    json r = json::array();
    for (double s : row) r.push_back(format_double(s));
    msnr.push_back(r);
  }
  summary["measurement_snr_db"] = msnr;
  json man = manifest("image", args, exp.master_seed, cfg);
  man["summary"] = summary;
  write_text(dir / "manifest.json", [&](std::ostream& os) { os << man.dump(2) << '\n'; });
  return 0;
}

int cmd_selftest(bool quick, const std::string& fault) {
  SelftestOptions opts;
  opts.quick = quick;
  if (!fault.empty()) {
    if (fault != "threshold-sign") throw ConfigError("unknown fault '" + fault + "'");
    opts.corrupt_threshold_sign = true;
  }
  const auto checks = run_selftest(opts);
  print_selftest_table(std::cout, checks);
  bool ok = true;
  for (const auto& c : checks) {
    if (!c.passed) {
      std::cerr << "selftest failed: " << c.name << '\n';
      ok = false;
    }
  }
  return ok ? 0 : kExitSelftest;
}

void add_common(CLI::App* sub, CommonArgs& a, bool experiment) {
  sub->add_option("--config", a.config, "JSON config file (or a previous manifest.json)");
  sub->add_option("--out", a.out, "output directory (default $ENTROMIN_OUT, else ./entromin_out)");
  sub->add_option("--seed", a.seed, "master seed override");
  sub->add_option("--threads", a.threads, "worker threads; 1 is the bitwise reference mode")->check(CLI::PositiveNumber);
  sub->add_option("--method", a.method, experiment ? "comma-separated method names" : "l1 | lp | sef | ref");
  sub->add_option("--lambda", a.lambda, "fixed regularization weight");
  sub->add_option("--nu", a.nu, "noise scale");
  sub->add_option("--input", a.input, experiment ? "input PGM image" : "measurement vector (.f64)");
  if (experiment) {
    sub->add_option("--scale", a.scale, "preset size")->check(CLI::IsMember({"desk", "paper"}));
    sub->add_option("--sigma", a.sigma, "sampling ratios")->delimiter(',');
    sub->add_flag("--timing", a.record_timing, "record wall_ms in the results CSV");
  } else {
    sub->add_option("--p", a.p, "regularizer exponent");
    sub->add_option("--alpha", a.alpha, "Renyi order");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"entropy-regularized sparse recovery"};
  app.set_version_flag("--version", version());
  app.require_subcommand(1);

  CommonArgs solve_args, ptc_args, noisy_args, image_args;
  SolveArgs sargs;
  auto* solve = app.add_subcommand("solve", "recover one sparse signal");
  add_common(solve, solve_args, false);
  solve->add_option("--n", sargs.n, "signal length of a generated instance");
  solve->add_option("--m", sargs.m, "measurements of a generated instance");
  solve->add_option("--sparsity", sargs.sparsity, "nonzeros of a generated instance");
  solve->add_option("--operator", sargs.op, "generated operator kind")->check(CLI::IsMember({"gaussian", "srm"}));
  solve->add_option("--operator-manifest", sargs.operator_file, "operator descriptor JSON for --input");

  auto* ptc = app.add_subcommand("ptc", "noiseless phase-transition grid");
  add_common(ptc, ptc_args, true);
  auto* noisy = app.add_subcommand("noisy", "noisy SNR sweep over M");
  add_common(noisy, noisy_args, true);
  auto* image = app.add_subcommand("image", "image recovery PSNR sweep");
  add_common(image, image_args, true);

  bool quick = false;
  std::string fault;
  auto* selftest = app.add_subcommand("selftest", "check the numerical oracles");
  selftest->add_flag("--quick", quick, "reduced sample counts");
  selftest->add_option("--inject-fault", fault)->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*solve) return cmd_solve(solve_args, sargs);
    if (*ptc) return cmd_ptc(ptc_args);
    if (*noisy) return cmd_noisy(noisy_args);
    if (*image) return cmd_image(image_args);
    if (*selftest) return cmd_selftest(quick, fault);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  }
  return kExitConfig;
}
