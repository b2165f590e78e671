#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "entromin/config.hpp"
#include "entromin/experiments.hpp"
#include "entromin/metrics.hpp"
#include "entromin/operators.hpp"
#include "entromin/regularizers.hpp"
#include "entromin/shrinkage.hpp"
#include "entromin/solver.hpp"

namespace py = pybind11;
using namespace entromin;

namespace {

py::dict trace_to_dict(const SolverTrace& t) {
  py::dict d;
  py::list records;
  for (const auto& r : t.records) {
    py::dict row;
    row["phase"] = r.phase;
    row["outer_iter"] = r.outer_iter;
    row["lambda"] = r.lambda;
    row["objective"] = r.objective;
    row["data_term"] = r.data_term;
    row["penalty_term"] = r.penalty_term;
    row["inner_iters"] = r.inner_iters;
    records.append(row);
  }
  d["records"] = records;
  d["kappa"] = t.kappa;
  d["total_outer_iters"] = t.total_outer_iters;
  d["phases"] = t.phases;
  d["notes"] = t.notes;
  return d;
}

SolverConfig config_from_dict(const py::dict& d) {
  // round-trip through JSON so Python sees the same field names as config files
  const std::string text = py::module_::import("json").attr("dumps")(d).cast<std::string>();
  return solver_config_from_json(json::parse(text));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "entropy-function sparse recovery core";
  m.attr("__version__") = version();

  py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);
  py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);

  py::enum_<RegularizerKind>(m, "RegularizerKind")
      .value("L1", RegularizerKind::L1)
      .value("LpP", RegularizerKind::LpP)
      .value("SEF", RegularizerKind::SEF)
      .value("REF", RegularizerKind::REF);

  py::class_<RegularizerSpec>(m, "RegularizerSpec")
      .def_static("l1", &RegularizerSpec::l1, py::arg("epsilon") = RegularizerSpec::kDefaultEpsilon)
      .def_static("lpp", &RegularizerSpec::lpp, py::arg("p"), py::arg("epsilon") = RegularizerSpec::kDefaultEpsilon)
      .def_static("sef", &RegularizerSpec::sef, py::arg("p"), py::arg("epsilon") = RegularizerSpec::kDefaultEpsilon)
      .def_static("ref", &RegularizerSpec::ref, py::arg("p"), py::arg("alpha"),
                  py::arg("epsilon") = RegularizerSpec::kDefaultEpsilon)
      .def_property_readonly("kind", &RegularizerSpec::kind)
      .def_property_readonly("p", &RegularizerSpec::p)
      .def_property_readonly("alpha", &RegularizerSpec::alpha)
      .def_property_readonly("epsilon", &RegularizerSpec::epsilon)
      .def("__repr__", [](const RegularizerSpec& s) { return "RegularizerSpec(" + to_json(s).dump() + ")"; });

  m.def("prob_map", &prob_map, py::arg("x"), py::arg("p"));
  m.def("sef_value", &sef_value, py::arg("x"), py::arg("spec"));
  m.def("ref_value", &ref_value, py::arg("x"), py::arg("spec"));
  m.def("sef_grad_mag", &sef_grad_mag, py::arg("x"), py::arg("spec"));
  m.def("ref_grad_mag", &ref_grad_mag, py::arg("x"), py::arg("spec"));
  m.def("nu_threshold", &nu_threshold, py::arg("x"), py::arg("spec"));
  m.def("penalty_value", &penalty_value, py::arg("x"), py::arg("spec"));
  m.def("penalty_weights", &penalty_weights, py::arg("x"), py::arg("spec"));

  m.def("soft_threshold", py::vectorize(&soft_threshold), py::arg("xt"), py::arg("tau"));
  m.def("reweighted_prox_step", &reweighted_prox_step, py::arg("xt"), py::arg("weights"), py::arg("lam"),
        py::arg("kappa"));

  py::class_<LinearOperator>(m, "LinearOperator")
      .def_property_readonly("rows", &LinearOperator::rows)
      .def_property_readonly("cols", &LinearOperator::cols)
      .def_property_readonly("kind", [](const LinearOperator& op) { return std::string(to_string(op.kind())); })
      .def_property_readonly("descriptor", [](const LinearOperator& op) { return to_json(op.descriptor()).dump(); })
      .def("apply", &LinearOperator::apply, py::arg("v"))
      .def("adjoint", &LinearOperator::adjoint, py::arg("u"))
      .def("to_dense", &LinearOperator::to_dense);

  m.def("make_identity", &make_identity, py::arg("n"));
  m.def("make_dense", &make_dense, py::arg("entries"));
  m.def(
      "make_gaussian",
      [](Index rows, Index cols, std::uint64_t seed, std::uint64_t stream) {
        return make_gaussian(rows, cols, {seed, stream});
      },
      py::arg("rows"), py::arg("cols"), py::arg("seed"), py::arg("stream") = 0);
  m.def(
      "make_srm",
      [](Index rows, Index cols, std::uint64_t seed, std::uint64_t stream) {
        return make_srm(rows, cols, {seed, stream});
      },
      py::arg("rows"), py::arg("cols"), py::arg("seed"), py::arg("stream") = 0);
  m.def("make_wavelet_frame", &make_wavelet_frame, py::arg("side"), py::arg("levels"));
  m.def("compose", &compose, py::arg("ops"));
  m.def(
      "dot_test", [](const LinearOperator& op, std::uint64_t seed) { return dot_test(op, {seed, 0}); },
      py::arg("op"), py::arg("seed") = 0);

  m.def("estimate_kappa", &estimate_kappa, py::arg("op"), py::arg("tol") = 1e-10, py::arg("max_iters") = 5000,
        py::arg("margin") = 0.01);
  m.def("gradient_step", &gradient_step, py::arg("x"), py::arg("op"), py::arg("y"), py::arg("kappa"));

  m.def(
      "solve",
      [](const Vector& y, const LinearOperator& op, const py::dict& config, std::optional<Vector> x0) {
        SolverConfig cfg = config_from_dict(config);
        if (x0) {
          cfg.initializer = Initializer::Provided;
          cfg.initial_point = *x0;
        }
        SolveResult res;
        {
          py::gil_scoped_release release;
          res = solve(y, op, cfg);
        }
        return py::make_tuple(res.x, trace_to_dict(res.trace));
      },
      py::arg("y"), py::arg("op"), py::arg("config") = py::dict(), py::arg("x0") = py::none(),
      "Recover x from y = A x (+ noise). `config` uses the JSON config field names.");

  m.def(
      "solve_analysis_image",
      [](const Vector& y, const LinearOperator& sensing, const LinearOperator& frame, const py::dict& config) {
        const std::string text = py::module_::import("json").attr("dumps")(config).cast<std::string>();
        const AnalysisConfig cfg = analysis_config_from_json(json::parse(text));
        AnalysisResult res;
        {
          py::gil_scoped_release release;
          res = solve_analysis_image(y, sensing, frame, cfg);
        }
        return py::make_tuple(res.s, res.objective);
      },
      py::arg("y"), py::arg("sensing"), py::arg("frame"), py::arg("config") = py::dict());

  m.def(
      "gen_instance",
      [](Index n, Index mm, Index s, std::uint64_t seed, double nu) {
        Instance inst = gen_instance(n, mm, s, seed, nu);
        py::dict d;
        d["x"] = inst.x;
        d["A"] = inst.a;
        d["y"] = inst.y;
        d["noise"] = inst.noise;
        d["measurement_snr_db"] = inst.measurement_snr_db;
        return d;
      },
      py::arg("n"), py::arg("m"), py::arg("s"), py::arg("seed"), py::arg("nu") = 0.0);
  m.def("nu_for_measurement_snr", &nu_for_measurement_snr, py::arg("n"), py::arg("s"), py::arg("target_db"));

  m.def(
      "metrics",
      [](const Vector& x, const Vector& xh, double peak) {
        const MetricReport r = metrics(x, xh, peak);
        py::dict d;
        d["rel_err"] = r.rel_err;
        d["snr_db"] = r.snr_db;
        d["psnr_db"] = r.psnr_db;
        d["exact"] = r.exact;
        return d;
      },
      py::arg("x_true"), py::arg("x_hat"), py::arg("peak") = 255.0);
}
