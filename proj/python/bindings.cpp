// Copyright 2026 The Catalyst Prune Authors
// SPDX-License-Identifier: Apache-2.0

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <random>

#include "catalyst/catalyst.hpp"
#include "catalyst/dynamics.hpp"
#include "catalyst/errors.hpp"
#include "catalyst/experiment.hpp"
#include "catalyst/geometry.hpp"
#include "catalyst/prune.hpp"

namespace py = pybind11;
using namespace catalyst;

namespace {

Submodule make_sub(Matrix w, Vector b_w, Matrix a, Vector b_a, const std::string& sigma) {
  Submodule s{std::move(w), std::move(b_w), std::move(a), std::move(b_a), activation_from_string(sigma)};
  s.validate();
  return s;
}

ForwardFn forward_of(const py::object& o) {
  if (py::isinstance<ExtendedSubmodule>(o)) return as_forward(o.cast<const ExtendedSubmodule&>());
  return as_forward(o.cast<const Submodule&>());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Catalyst structured pruning core";

  auto base = py::register_exception<Error>(m, "CatalystError", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<ShapeError>(m, "ShapeError", base.ptr());
  py::register_exception<IndexError>(m, "IndexError", base.ptr());
  py::register_exception<NumericalError>(m, "NumericalError", base.ptr());
  py::register_exception<DynamicsError>(m, "DynamicsError", base.ptr());
  py::register_exception<NoWitnessError>(m, "NoWitnessError", base.ptr());
  py::register_exception<IoError>(m, "IoError", base.ptr());

  py::class_<Submodule>(m, "Submodule")
      .def(py::init(&make_sub), py::arg("w"), py::arg("b_w"), py::arg("a"), py::arg("b_a"),
           py::arg("sigma") = "relu")
      .def_readwrite("w", &Submodule::w)
      .def_readwrite("b_w", &Submodule::b_w)
      .def_readwrite("a", &Submodule::a)
      .def_readwrite("b_a", &Submodule::b_a)
      .def_property_readonly("sigma", [](const Submodule& s) { return std::string(to_string(s.sigma)); })
      .def_property_readonly("n_hidden", &Submodule::n_hidden)
      .def("__call__", [](const Submodule& s, const Vector& x) { return forward_submodule(s, x); });

  py::class_<ExtendedSubmodule>(m, "ExtendedSubmodule")
      .def(py::init([](const Submodule& sub, Vector d, Vector dbar) {
             ExtendedSubmodule e{sub, CatalystDiag(std::move(d)), CatalystDiag(std::move(dbar))};
             e.validate();
             return e;
           }),
           py::arg("sub"), py::arg("d"), py::arg("dbar"))
      .def_readwrite("sub", &ExtendedSubmodule::sub)
      .def_property(
          "d", [](const ExtendedSubmodule& e) { return e.d.delta; },
          [](ExtendedSubmodule& e, Vector v) { e.d.delta = std::move(v); })
      .def_property(
          "dbar", [](const ExtendedSubmodule& e) { return e.dbar.delta; },
          [](ExtendedSubmodule& e, Vector v) { e.dbar.delta = std::move(v); })
      .def("__call__", [](const ExtendedSubmodule& e, const Vector& x) { return forward_extended(e, x); });

  m.def("filter_norms", &filter_norms, py::arg("w"));
  m.def(
      "psi",
      [](const Vector& d, const Vector& dbar, const Vector& x, const std::string& sigma) {
        return psi(CatalystDiag(d), CatalystDiag(dbar), x, activation_from_string(sigma));
      },
      py::arg("d"), py::arg("dbar"), py::arg("x"), py::arg("sigma") = "relu");
  m.def("embed", py::overload_cast<const Submodule&, double>(&embed), py::arg("sub"), py::arg("c") = 1.0);
  m.def(
      "catalyst_reg", [](const Vector& d, const Matrix& w) { return catalyst_reg(CatalystDiag(d), w); },
      py::arg("d"), py::arg("w"));
  m.def(
      "catalyst_reg_grad",
      [](const Vector& d, const Matrix& w) {
        auto g = catalyst_reg_grad(CatalystDiag(d), w);
        return py::make_tuple(g.d, g.w);
      },
      py::arg("d"), py::arg("w"));
  m.def("c_ratios", &c_ratios, py::arg("ext"));

  m.def(
      "select_prune_indices", [](const ExtendedSubmodule& e) { return select_prune_indices(e).indices(); },
      py::arg("ext"));
  m.def(
      "prune",
      [](const ExtendedSubmodule& e, std::vector<std::size_t> p) {
        return prune(e, PruneSet(std::move(p), e.sub.n_hidden()));
      },
      py::arg("ext"), py::arg("indices"));
  m.def(
      "verify_function_preservation",
      [](const py::object& before, const py::object& after, std::size_t n, std::uint64_t seed) {
        const ForwardFn b = forward_of(before), a = forward_of(after);
        return verify_function_preservation(b, a, n, b.input_dim, seed);
      },
      py::arg("before"), py::arg("after"), py::arg("n_samples") = 100, py::arg("seed") = 0);

  m.def("dist_to_xtgt", &geometry::dist_to_xtgt, py::arg("w"));
  m.def(
      "witness_d", [](const Matrix& w, double eps, double k) { return geometry::witness_d(w, eps, k).delta; },
      py::arg("w"), py::arg("epsilon"), py::arg("k"));

  m.def("f_coeff", &dynamics::f_coeff, py::arg("x"), py::arg("y"), py::arg("alpha"));
  m.def("recurrence_step", &dynamics::recurrence_step, py::arg("c"), py::arg("lr"), py::arg("alpha"));
  m.def(
      "simulate",
      [](double c0, double lr, double alpha, long steps, std::size_t dim, std::uint64_t seed) {
        std::mt19937_64 rng(seed);
        const auto s0 = dynamics::make_state(c0, dim, alpha, dynamics::LambdaSchedule::constant(lr), rng);
        const auto tr = dynamics::simulate_trajectory(s0, steps);
        std::vector<double> c;
        for (const auto& p : tr.points) c.push_back(p.c);
        py::dict out;
        out["c"] = c;
        out["outcome"] = std::string(dynamics::to_string(tr.outcome));
        out["steps_to_exit"] = tr.steps_to_exit;
        out["safety_ok"] = tr.safety_ok;
        return out;
      },
      py::arg("c0"), py::arg("lr"), py::arg("alpha"), py::arg("steps"), py::arg("dim") = 8, py::arg("seed") = 0);

  m.def(
      "run_json",
      [](const std::string& config_text, const std::string& output_dir) {
        ExperimentConfig cfg = parse_config(config_text);
        if (!output_dir.empty()) cfg.output_dir = output_dir;
        ExperimentResult res;
        {
          py::gil_scoped_release release;
          res = run_experiment(cfg);
        }
        return to_json(res.summary).dump();
      },
      py::arg("config_text"), py::arg("output_dir") = "");
}
