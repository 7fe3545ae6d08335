// Python bindings: configs, presets, experiment runs and analysis helpers.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "quenchlab/errors.hpp"
#include "quenchlab/experiment.hpp"
#include "quenchlab/presets.hpp"
#include "quenchlab/records_io.hpp"
#include "quenchlab/sweep.hpp"
#include "quenchlab/units.hpp"

namespace py = pybind11;
using namespace quenchlab;

namespace {

// Record table as {column: float64 array}; absent cells become NaN.
py::dict table_to_dict(const RecordTable& table) {
  py::dict out;
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    py::array_t<double> col(static_cast<py::ssize_t>(table.rows.size()));
    auto view = col.mutable_unchecked<1>();
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
      const auto& cell = table.rows[r][c];
      view(static_cast<py::ssize_t>(r)) = cell ? *cell : std::numeric_limits<double>::quiet_NaN();
    }
    out[py::str(table.columns[c])] = col;
  }
  return out;
}

py::dict result_to_dict(const ExperimentResult& result) {
  py::dict out;
  out["name"] = result.name;
  out["mode"] = std::string(to_string(result.mode));
  if (result.spectrum) {
    out["spectrum"] = table_to_dict(spectrum_table(*result.spectrum));
    return out;
  }
  py::dict runs;
  for (const auto& run : result.runs) {
    py::dict r;
    r["records"] = table_to_dict(flatten_records(run.records, result.sites));
    if (!run.echo.empty()) r["echo"] = table_to_dict(flatten_records(run.echo, result.sites));
    runs[py::str(run.label)] = r;
  }
  out["runs"] = runs;
  return out;
}

py::dict config_summary(const ExperimentConfig& c) {
  py::dict out;
  out["name"] = c.name;
  out["note"] = c.note;
  out["mode"] = std::string(to_string(c.mode));
  out["sites"] = c.sites;
  out["levels"] = c.levels;
  out["J_mhz"] = c.J_mhz;
  out["U_mhz"] = c.U_mhz;
  out["Omega_mhz"] = c.Omega_mhz;
  out["duration_ns"] = c.duration_ns;
  out["duration_assumed"] = c.duration_assumed;
  out["driven"] = c.driven();
  std::vector<std::string> labels;
  for (const auto& s : c.states) labels.push_back(s.label);
  out["states"] = labels;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Multilevel Bose-Hubbard quench and time-reversal simulator";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<LookupError>(m, "LookupError", PyExc_KeyError);
  py::register_exception<NumericsError>(m, "NumericsError", PyExc_ArithmeticError);
  py::register_exception<ResourceError>(m, "ResourceError", PyExc_MemoryError);

  m.def("preset_names", &preset_names, "Names of the built-in presets.");
  m.def(
      "preset_text", [](const std::string& name) { return preset_text(name); }, py::arg("name"),
      "Config text of a preset.");
  m.def(
      "check_config", [](const std::string& text) { return config_summary(load_config(text)); }, py::arg("text"),
      "Validate config text and return its main fields.");
  m.def(
      "run_config",
      [](const std::string& text) {
        const ExperimentConfig config = load_config(text);
        ExperimentResult result;
        {
          py::gil_scoped_release release;
          result = run_experiment(config);
        }
        return result_to_dict(result);
      },
      py::arg("text"),
      "Run a config. Returns {'runs': {label: {'records': {column: array}, 'echo': ...}}} or a spectrum table.");
  m.def(
      "run_preset",
      [](const std::string& name) {
        ExperimentResult result;
        {
          const ExperimentConfig config = preset(name);
          py::gil_scoped_release release;
          result = run_experiment(config);
        }
        return result_to_dict(result);
      },
      py::arg("name"), "Run a preset without its sweep axes.");
  m.def(
      "sweep_size",
      [](const std::string& text, const std::vector<std::string>& axes) {
        SweepSpec spec = sweep_from_config(load_config(text));
        for (const auto& a : axes) spec.axes.push_back(parse_axis(a));
        return sweep_size(spec);
      },
      py::arg("text"), py::arg("axes") = std::vector<std::string>{}, "Number of points of a sweep.");

  m.def("effective_coupling", &effective_coupling, py::arg("J"), py::arg("eps"), py::arg("nu"),
        "J * J0(eps / nu), in the units of J.");
  m.def("bessel_j0", &bessel_j0, py::arg("x"));
  m.def(
      "sector_dimension",
      [](int sites, int levels, std::optional<int> particles) { return build_basis(sites, levels, particles)->dim(); },
      py::arg("sites"), py::arg("levels"), py::arg("particles") = std::nullopt);
  m.def(
      "dominant_frequency",
      [](const std::vector<double>& series, double dt_ns) {
        const FrequencyPeak p = dominant_frequency(series, dt_ns);
        py::dict out;
        out["found"] = p.found;
        out["frequency_mhz"] = p.frequency_mhz;
        out["resolution_mhz"] = p.resolution_mhz;
        out["magnitude"] = p.magnitude;
        return out;
      },
      py::arg("series"), py::arg("dt_ns"), "Largest nonzero-frequency peak of a uniformly sampled series.");
  m.def("page_entropy", &page_entropy, py::arg("sites"), py::arg("cut"), py::arg("levels"));
}
