#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ifo/analytic.hpp"
#include "ifo/noise.hpp"
#include "ifo/runner.hpp"
#include "ifo/spectrum.hpp"

namespace py = pybind11;

namespace {

std::string resolve_config(const std::string& text, const std::string& preset, const std::vector<std::string>& sets) {
  return ifo::scenario::parse_scenario_text(text, preset, sets).to_json().dump();
}

py::tuple run(const std::string& mode, const std::string& out_dir, const std::string& config_path,
              const std::string& preset, const std::vector<std::string>& sets) {
  const auto cfg = ifo::scenario::parse_scenario(config_path, preset, sets);
  ifo::runner::RunResult r;
  {
    py::gil_scoped_release release;
    r = ifo::runner::run_sweep(cfg, ifo::runner::mode_from_string(mode), out_dir);
  }
  return py::make_tuple(r.exit_code, r.outputs, r.metadata.dump());
}

py::dict validate(std::size_t grid, bool corrupt_splitter) {
  ifo::net::ValidationOptions o;
  o.grid = grid;
  o.corrupt_splitter = corrupt_splitter;
  const auto rep = ifo::net::validate_against_analytic(o);
  py::dict d;
  d["grid_points"] = rep.grid_points;
  d["transmission_dev"] = rep.transmission_dev;
  d["mi_transfer_dev"] = rep.mi_transfer_dev;
  d["mi_nsr_dev"] = rep.mi_nsr_dev;
  d["gmi_transfer_dev"] = rep.gmi_transfer_dev;
  d["gmi_nsr_dev"] = rep.gmi_nsr_dev;
  d["passed"] = rep.passed;
  return d;
}

}  // namespace

PYBIND11_MODULE(_ifo, m) {
  m.doc() = "Interferometer network toolkit (C++ core)";

  py::register_exception<ifo::ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<ifo::ResonanceError>(m, "ResonanceError", PyExc_ArithmeticError);
  py::register_exception<ifo::SolverError>(m, "SolverError", PyExc_RuntimeError);

  m.def("ideal_transmission", &ifo::analytic::ideal_transmission, py::arg("phi_n"), py::arg("phi_e"),
        "cos^2(gamma/2) of the lossless coin, phases in radians");
  m.def("gamma_phase", &ifo::analytic::gamma_phase, py::arg("phi_n"), py::arg("phi_e"));
  m.def("power_gain", &ifo::analytic::power_gain, py::arg("theta_b"), py::arg("R") = 1.0);
  m.def("bias_for_gain", &ifo::analytic::bias_for_gain, py::arg("gain"));
  m.def("first_notch_frequency", &ifo::analytic::first_notch_frequency, py::arg("mean_length"));
  m.def("ctn_strain_asd", &ifo::noise::ctn_strain_asd, py::arg("f"), py::arg("cavity_length"));
  m.def(
      "gm_nsr",
      [](double gain, double mean_length, double f, double wavelength, double power) {
        return ifo::analytic::gm_nsr({wavelength, power}, gain, mean_length, f).value;
      },
      py::arg("gain"), py::arg("mean_length"), py::arg("f"), py::arg("wavelength") = 1064e-9,
      py::arg("power") = 125.0);

  m.def("preset_names", &ifo::net::preset_names);
  m.def("mode_names", &ifo::runner::mode_names);
  m.def("_resolve_config", &resolve_config, py::arg("text") = "", py::arg("preset") = "",
        py::arg("sets") = std::vector<std::string>{});
  m.def("_run", &run, py::arg("mode"), py::arg("out_dir"), py::arg("config_path") = "", py::arg("preset") = "",
        py::arg("sets") = std::vector<std::string>{});
  m.def("validate", &validate, py::arg("grid") = 10, py::arg("corrupt_splitter") = false,
        "Network against closed forms; returns the deviation table");
}
