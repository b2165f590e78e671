#include "entromin/config.hpp"

#include <set>

namespace entromin {

namespace {

void reject_unknown(const json& j, std::initializer_list<const char*> known, const char* where) {
  if (!j.is_object()) throw FormatError(std::string(where) + ": expected a JSON object");
  const std::set<std::string> allowed(known.begin(), known.end());
  for (const auto& [key, _] : j.items()) {
    if (!allowed.count(key)) throw FormatError(std::string(where) + ": unknown key '" + key + "'");
  }
}

json optional_to_json(const std::optional<double>& v, const char* unset = "auto") {
  return v ? json(*v) : json(unset);
}

std::optional<double> optional_from_json(const json& j, const char* key, const char* unset = "auto") {
  if (j.is_string() && j.get<std::string>() == unset) return std::nullopt;
  if (!j.is_number()) throw FormatError(std::string(key) + ": expected a number or \"" + unset + "\"");
  return j.get<double>();
}

template <class T>
T get_as(const json& j, const char* key) {
  try {
    return j.get<T>();
  } catch (const json::exception& e) {
    throw FormatError(std::string(key) + ": " + e.what());
  }
}

}  // namespace

json to_json(const RegularizerSpec& spec) {
  json j;
  j["kind"] = to_string(spec.kind());
  if (spec.kind() != RegularizerKind::L1) j["p"] = spec.p();
  if (spec.kind() == RegularizerKind::REF) j["alpha"] = spec.alpha();
  j["epsilon"] = spec.epsilon();
  return j;
}

RegularizerSpec regularizer_from_json(const json& j) {
  reject_unknown(j, {"kind", "p", "alpha", "epsilon"}, "regularizer");
  if (!j.contains("kind")) throw FormatError("regularizer: missing 'kind'");
  const auto kind = regularizer_kind_from_string(get_as<std::string>(j["kind"], "regularizer.kind"));
  const double p = j.contains("p") ? get_as<double>(j["p"], "regularizer.p") : 1.0;
  const double alpha = j.contains("alpha") ? get_as<double>(j["alpha"], "regularizer.alpha") : 0.0;
  const double eps = j.contains("epsilon") ? get_as<double>(j["epsilon"], "regularizer.epsilon")
                                           : RegularizerSpec::kDefaultEpsilon;
  return RegularizerSpec::make(kind, p, alpha, eps);
}

json to_json(const SolverConfig& c) {
  json j;
  j["regularizer"] = to_json(c.regularizer);
  j["lambda0"] = optional_to_json(c.lambda0);
  j["lambda_min"] = optional_to_json(c.lambda_min);
  j["kappa"] = optional_to_json(c.kappa);
  j["continuation_ratio"] = optional_to_json(c.continuation_ratio, "fixed");
  j["outer_max_iters"] = c.outer_max_iters;
  j["inner_max_iters"] = c.inner_max_iters;
  j["max_total_outer_iters"] = c.max_total_outer_iters;
  j["outer_tol"] = c.outer_tol;
  j["inner_tol"] = c.inner_tol;
  j["kappa_tol"] = c.kappa_tol;
  j["acceleration"] = to_string(c.acceleration);
  j["initializer"] = to_string(c.initializer);
  j["init_lambda"] = optional_to_json(c.init_lambda);
  j["stop_when_stationary"] = c.stop_when_stationary;
  return j;
}

SolverConfig solver_config_from_json(const json& j, const SolverConfig& base) {
  reject_unknown(j,
                 {"regularizer", "lambda0", "lambda_min", "kappa", "continuation_ratio", "outer_max_iters",
                  "inner_max_iters", "max_total_outer_iters", "outer_tol", "inner_tol", "kappa_tol", "acceleration",
                  "initializer", "init_lambda", "stop_when_stationary"},
                 "solver");
  SolverConfig c = base;
  if (j.contains("regularizer")) c.regularizer = regularizer_from_json(j["regularizer"]);
  if (j.contains("lambda0")) c.lambda0 = optional_from_json(j["lambda0"], "solver.lambda0");
  if (j.contains("lambda_min")) c.lambda_min = optional_from_json(j["lambda_min"], "solver.lambda_min");
  if (j.contains("kappa")) c.kappa = optional_from_json(j["kappa"], "solver.kappa");
  if (j.contains("continuation_ratio")) {
    c.continuation_ratio = optional_from_json(j["continuation_ratio"], "solver.continuation_ratio", "fixed");
  }
  if (j.contains("outer_max_iters")) c.outer_max_iters = get_as<int>(j["outer_max_iters"], "solver.outer_max_iters");
  if (j.contains("inner_max_iters")) c.inner_max_iters = get_as<int>(j["inner_max_iters"], "solver.inner_max_iters");
  if (j.contains("max_total_outer_iters")) {
    c.max_total_outer_iters = get_as<long>(j["max_total_outer_iters"], "solver.max_total_outer_iters");
  }
  if (j.contains("outer_tol")) c.outer_tol = get_as<double>(j["outer_tol"], "solver.outer_tol");
  if (j.contains("inner_tol")) c.inner_tol = get_as<double>(j["inner_tol"], "solver.inner_tol");
  if (j.contains("kappa_tol")) c.kappa_tol = get_as<double>(j["kappa_tol"], "solver.kappa_tol");
  if (j.contains("acceleration")) {
    c.acceleration = acceleration_from_string(get_as<std::string>(j["acceleration"], "solver.acceleration"));
  }
  if (j.contains("initializer")) {
    c.initializer = initializer_from_string(get_as<std::string>(j["initializer"], "solver.initializer"));
  }
  if (j.contains("init_lambda")) c.init_lambda = optional_from_json(j["init_lambda"], "solver.init_lambda");
  if (j.contains("stop_when_stationary")) {
    c.stop_when_stationary = get_as<bool>(j["stop_when_stationary"], "solver.stop_when_stationary");
  }
  c.validate();
  return c;
}

json to_json(const AnalysisConfig& c) {
  json j;
  j["regularizer"] = to_json(c.regularizer);
  j["lambda"] = c.lambda;
  j["outer_max_iters"] = c.outer_max_iters;
  j["outer_tol"] = c.outer_tol;
  j["mu"] = c.mu;
  j["bregman_max_iters"] = c.bregman_max_iters;
  j["bregman_tol"] = c.bregman_tol;
  j["init_l1_lambda"] = c.init_l1_lambda ? json(*c.init_l1_lambda) : json("none");
  return j;
}

AnalysisConfig analysis_config_from_json(const json& j, const AnalysisConfig& base) {
  reject_unknown(j,
                 {"regularizer", "lambda", "outer_max_iters", "outer_tol", "mu", "bregman_max_iters", "bregman_tol",
                  "init_l1_lambda"},
                 "analysis solver");
  AnalysisConfig c = base;
  if (j.contains("regularizer")) c.regularizer = regularizer_from_json(j["regularizer"]);
  if (j.contains("lambda")) c.lambda = get_as<double>(j["lambda"], "analysis.lambda");
  if (j.contains("outer_max_iters")) c.outer_max_iters = get_as<int>(j["outer_max_iters"], "analysis.outer_max_iters");
  if (j.contains("outer_tol")) c.outer_tol = get_as<double>(j["outer_tol"], "analysis.outer_tol");
  if (j.contains("mu")) c.mu = get_as<double>(j["mu"], "analysis.mu");
  if (j.contains("bregman_max_iters")) {
    c.bregman_max_iters = get_as<int>(j["bregman_max_iters"], "analysis.bregman_max_iters");
  }
  if (j.contains("bregman_tol")) c.bregman_tol = get_as<double>(j["bregman_tol"], "analysis.bregman_tol");
  if (j.contains("init_l1_lambda")) c.init_l1_lambda = optional_from_json(j["init_l1_lambda"], "analysis.init_l1_lambda", "none");
  if (!(c.lambda >= 0.0) || !(c.mu > 0.0) || c.outer_max_iters < 1 || c.bregman_max_iters < 1) {
    throw DomainError("analysis solver: lambda >= 0, mu > 0 and iteration caps >= 1 required");
  }
  return c;
}

json to_json(const OperatorDescriptor& d) {
  json j;
  j["generator"] = d.generator;
  j["rows"] = d.rows;
  j["cols"] = d.cols;
  if (d.generator == "gaussian" || d.generator == "srm") j["seed"] = {{"master", d.seed.master}, {"stream", d.seed.stream}};
  if (d.generator == "wavelet_frame") {
    j["side"] = d.side;
    j["levels"] = d.levels;
  }
  if (!d.children.empty()) {
    j["children"] = json::array();
    for (const auto& c : d.children) j["children"].push_back(to_json(c));
  }
  return j;
}

OperatorDescriptor operator_descriptor_from_json(const json& j) {
  reject_unknown(j, {"generator", "rows", "cols", "seed", "side", "levels", "children"}, "operator");
  OperatorDescriptor d;
  if (!j.contains("generator")) throw FormatError("operator: missing 'generator'");
  d.generator = get_as<std::string>(j["generator"], "operator.generator");
  if (j.contains("rows")) d.rows = get_as<Index>(j["rows"], "operator.rows");
  if (j.contains("cols")) d.cols = get_as<Index>(j["cols"], "operator.cols");
  if (j.contains("seed")) {
    const auto& s = j["seed"];
    if (s.is_number_unsigned()) {
      d.seed = {s.get<std::uint64_t>(), 0};
    } else {
      reject_unknown(s, {"master", "stream"}, "operator.seed");
      d.seed.master = s.value("master", std::uint64_t{0});
      d.seed.stream = s.value("stream", std::uint64_t{0});
    }
  }
  if (j.contains("side")) d.side = get_as<Index>(j["side"], "operator.side");
  if (j.contains("levels")) d.levels = get_as<int>(j["levels"], "operator.levels");
  if (j.contains("children")) {
    for (const auto& c : j["children"]) d.children.push_back(operator_descriptor_from_json(c));
  }
  return d;
}

namespace {

json methods_to_json(const std::vector<Method>& methods) {
  json arr = json::array();
  for (const auto& m : methods) arr.push_back({{"name", m.name}, {"solver", to_json(m.config)}});
  return arr;
}

std::vector<Method> methods_from_json(const json& arr, const SolverConfig& base) {
  if (!arr.is_array()) throw FormatError("methods: expected an array");
  std::vector<Method> out;
  for (const auto& m : arr) {
    reject_unknown(m, {"name", "solver"}, "method");
    Method method;
    method.name = get_as<std::string>(m.at("name"), "method.name");
    method.config = m.contains("solver") ? solver_config_from_json(m["solver"], base) : base;
    out.push_back(std::move(method));
  }
  return out;
}

}  // namespace

json to_json(const ExperimentGrid& g) {
  json j;
  j["n"] = g.n;
  j["sigmas"] = g.sigmas;
  j["rhos"] = g.rhos;
  j["trials"] = g.trials;
  j["master_seed"] = g.master_seed;
  j["success_threshold"] = g.success_threshold;
  j["noise_scale"] = g.noise_scale;
  j["methods"] = methods_to_json(g.methods);
  return j;
}

ExperimentGrid experiment_grid_from_json(const json& j, const ExperimentGrid& base) {
  reject_unknown(j, {"n", "sigmas", "rhos", "trials", "master_seed", "success_threshold", "noise_scale", "methods"},
                 "grid");
  ExperimentGrid g = base;
  if (j.contains("n")) g.n = get_as<Index>(j["n"], "grid.n");
  if (j.contains("sigmas")) g.sigmas = get_as<std::vector<double>>(j["sigmas"], "grid.sigmas");
  if (j.contains("rhos")) g.rhos = get_as<std::vector<double>>(j["rhos"], "grid.rhos");
  if (j.contains("trials")) g.trials = get_as<int>(j["trials"], "grid.trials");
  if (j.contains("master_seed")) g.master_seed = get_as<std::uint64_t>(j["master_seed"], "grid.master_seed");
  if (j.contains("success_threshold")) g.success_threshold = get_as<double>(j["success_threshold"], "grid.success_threshold");
  if (j.contains("noise_scale")) g.noise_scale = get_as<double>(j["noise_scale"], "grid.noise_scale");
  if (j.contains("methods")) g.methods = methods_from_json(j["methods"], SolverConfig{});
  g.validate();
  return g;
}

json to_json(const NoisySweepConfig& c) {
  json j;
  j["n"] = c.n;
  j["sparsity"] = c.sparsity;
  j["nu"] = c.nu;
  j["measurements"] = c.measurements;
  j["trials"] = c.trials;
  j["master_seed"] = c.master_seed;
  j["dev_trials"] = c.dev_trials;
  j["lambda_grid"] = c.lambda_grid;
  j["methods"] = methods_to_json(c.methods);
  return j;
}

NoisySweepConfig noisy_sweep_from_json(const json& j, const NoisySweepConfig& base) {
  reject_unknown(j,
                 {"n", "sparsity", "nu", "measurements", "trials", "master_seed", "dev_trials", "lambda_grid", "methods"},
                 "noisy");
  NoisySweepConfig c = base;
  if (j.contains("n")) c.n = get_as<Index>(j["n"], "noisy.n");
  if (j.contains("sparsity")) c.sparsity = get_as<Index>(j["sparsity"], "noisy.sparsity");
  if (j.contains("nu")) c.nu = get_as<double>(j["nu"], "noisy.nu");
  if (j.contains("measurements")) c.measurements = get_as<std::vector<Index>>(j["measurements"], "noisy.measurements");
  if (j.contains("trials")) c.trials = get_as<int>(j["trials"], "noisy.trials");
  if (j.contains("master_seed")) c.master_seed = get_as<std::uint64_t>(j["master_seed"], "noisy.master_seed");
  if (j.contains("dev_trials")) c.dev_trials = get_as<int>(j["dev_trials"], "noisy.dev_trials");
  if (j.contains("lambda_grid")) c.lambda_grid = get_as<std::vector<double>>(j["lambda_grid"], "noisy.lambda_grid");
  if (j.contains("methods")) c.methods = methods_from_json(j["methods"], SolverConfig{});
  c.validate();
  return c;
}

json to_json(const ImageExperimentConfig& c) {
  json j;
  j["sigmas"] = c.sigmas;
  j["noise_levels"] = c.noise_levels;
  j["levels"] = c.levels;
  j["master_seed"] = c.master_seed;
  json arr = json::array();
  for (const auto& m : c.methods) arr.push_back({{"name", m.name}, {"solver", to_json(m.config)}});
  j["methods"] = arr;
  return j;
}

ImageExperimentConfig image_experiment_from_json(const json& j, const ImageExperimentConfig& base) {
  reject_unknown(j, {"sigmas", "noise_levels", "levels", "master_seed", "methods"}, "image");
  ImageExperimentConfig c = base;
  if (j.contains("sigmas")) c.sigmas = get_as<std::vector<double>>(j["sigmas"], "image.sigmas");
  if (j.contains("noise_levels")) c.noise_levels = get_as<std::vector<double>>(j["noise_levels"], "image.noise_levels");
  if (j.contains("levels")) c.levels = get_as<int>(j["levels"], "image.levels");
  if (j.contains("master_seed")) c.master_seed = get_as<std::uint64_t>(j["master_seed"], "image.master_seed");
  if (j.contains("methods")) {
    c.methods.clear();
    for (const auto& m : j["methods"]) {
      reject_unknown(m, {"name", "solver"}, "image method");
      ImageMethod im;
      im.name = get_as<std::string>(m.at("name"), "image method.name");
      im.config = m.contains("solver") ? analysis_config_from_json(m["solver"]) : AnalysisConfig{};
      c.methods.push_back(std::move(im));
    }
  }
  c.validate();
  return c;
}

}  // namespace entromin
