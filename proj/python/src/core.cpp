#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "injphase/analysis.hpp"
#include "injphase/config.hpp"
#include "injphase/scenarios.hpp"
#include "injphase/steady_state.hpp"
#include "injphase/thermal.hpp"
#include "injphase/version.hpp"

namespace py = pybind11;
using namespace injphase;

namespace {

Settings to_settings(const py::dict& d) {
  Settings s;
  for (const auto& [k, v] : d) s[py::str(k)] = py::str(v);
  return s;
}

py::dict tables_to_dict(const std::vector<Table>& tables) {
  py::dict out;
  for (const auto& t : tables) {
    py::dict tab;
    tab["columns"] = t.columns;
    tab["rows"] = t.rows;
    tab["summary"] = t.summary;
    out[py::str(t.name)] = tab;
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Injection-locked phase modulator model";
  m.attr("__version__") = kVersion;

  py::register_exception<ParamError>(m, "ParamError", PyExc_ValueError);
  py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);

  py::class_<LaserParams>(m, "LaserParams")
      .def(py::init<>())
      .def_static("reference", &LaserParams::reference)
      .def_readwrite("tau_ph", &LaserParams::tau_ph)
      .def_readwrite("tau_e", &LaserParams::tau_e)
      .def_readwrite("epsilon", &LaserParams::epsilon)
      .def_readwrite("N_tr", &LaserParams::N_tr)
      .def_readwrite("N_th", &LaserParams::N_th)
      .def_readwrite("C_sp", &LaserParams::C_sp)
      .def_readwrite("Gamma", &LaserParams::Gamma)
      .def_readwrite("alpha", &LaserParams::alpha)
      .def_readwrite("chi", &LaserParams::chi)
      .def_readwrite("lambda_", &LaserParams::lambda)
      .def("validate", &LaserParams::validate);

  py::class_<SteadyState>(m, "SteadyState")
      .def_readonly("N_s", &SteadyState::N_s)
      .def_readonly("Q_s", &SteadyState::Q_s)
      .def_readonly("omega_shift", &SteadyState::omega_shift);

  py::class_<ThermalParams>(m, "ThermalParams")
      .def(py::init<>())
      .def_readwrite("r_h", &ThermalParams::r_h)
      .def_readwrite("tau_h", &ThermalParams::tau_h)
      .def_readwrite("mu_omega", &ThermalParams::mu_omega)
      .def_readwrite("I_b", &ThermalParams::I_b)
      .def("steady_dT", &ThermalParams::steady_dT, py::arg("I"));

  m.def("threshold_current", &threshold_current, py::arg("p"));
  m.def("solve_operating_point", &solve_operating_point, py::arg("p"), py::arg("I_s"));
  m.def(
      "steady_residuals",
      [](const LaserParams& p, double I_s, const SteadyState& s) {
        const auto r = steady_residuals(p, I_s, s);
        return py::make_tuple(r.carrier, r.photon);
      },
      py::arg("p"), py::arg("I_s"), py::arg("state"));
  m.def(
      "pair_phase_shift",
      [](const LaserParams& p, double I_s1, double I_s2, double d, const std::string& method) {
        return pair_phase_shift(p, I_s1, I_s2, d, parse_dipi_method(method));
      },
      py::arg("p"), py::arg("I_s1"), py::arg("I_s2"), py::arg("d"), py::arg("method") = "numerical");
  m.def(
      "delta_I_pi",
      [](const LaserParams& p, double I_s, double d, const std::string& method) {
        return delta_I_pi(p, I_s, d, parse_dipi_method(method));
      },
      py::arg("p"), py::arg("I_s"), py::arg("d"), py::arg("method") = "numerical");

  m.def("ierfc", &ierfc, py::arg("z"));
  m.def("y_exact", &y_exact, py::arg("p"));
  m.def("f_fit", &f_fit, py::arg("p"));

  m.def(
      "wilson_interval",
      [](std::size_t errors, std::size_t n) {
        const auto r = wilson_interval(errors, n);
        return py::make_tuple(r.rate, r.ci_low, r.ci_high);
      },
      py::arg("errors"), py::arg("n"));
  m.def(
      "ks_uniform",
      [](const std::vector<double>& x, double lo, double hi) {
        const auto r = ks_uniform(x, lo, hi);
        return py::make_tuple(r.statistic, r.p_value);
      },
      py::arg("x"), py::arg("lo"), py::arg("hi"));

  m.def("scenario_names", &scenario_names);
  m.def("known_keys", &known_keys);
  m.def(
      "run_scenario",
      [](const std::string& name, const py::dict& settings, std::size_t workers) {
        const auto cfg = build_config(to_settings(settings));
        RunOptions opts;
        opts.workers = workers;
        ScenarioResult r;
        {
          py::gil_scoped_release release;
          r = run_scenario(name, cfg, opts);
        }
        py::dict out = tables_to_dict(r.tables);
        out["_notes"] = r.notes;
        return out;
      },
      py::arg("name"), py::arg("settings") = py::dict(), py::arg("workers") = 1,
      "Runs a named scenario; settings maps 'section.key' to a value.");
}
