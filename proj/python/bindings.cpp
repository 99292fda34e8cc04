#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "entnum/discretization.hpp"
#include "entnum/error.hpp"
#include "entnum/fit.hpp"
#include "entnum/greedy.hpp"
#include "entnum/harness.hpp"
#include "entnum/spaces.hpp"

namespace py = pybind11;
using namespace entnum;

namespace {

// Reports cross the boundary as JSON text; the Python side parses it.
std::string run_json(const std::string& config_json) {
  const ExperimentConfig config = config_from_json(nlohmann::json::parse(config_json));
  return report_to_json(run(config));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Greedy approximation, entropy numbers and sampling discretization";
  py::register_exception<Error>(m, "EntnumError", PyExc_ValueError);

  py::class_<NormedSpace>(m, "NormedSpace")
      .def_static("sequence", &NormedSpace::sequence, py::arg("dim"), py::arg("q"))
      .def_static("discrete", &NormedSpace::discrete, py::arg("weights"), py::arg("q"))
      .def_property_readonly("dim", &NormedSpace::dim)
      .def_property_readonly("q", &NormedSpace::q)
      .def_property_readonly("dual_exponent", &NormedSpace::dual_exponent)
      .def("norm", &NormedSpace::norm)
      .def("dual_norm", &NormedSpace::dual_norm)
      .def("pairing", &NormedSpace::pairing)
      .def("norming_functional",
           [](const NormedSpace& s, const Vector& f) { return norming_functional(s, f).coefficients; });

  py::class_<Dictionary>(m, "Dictionary")
      .def_static("canonical", &Dictionary::canonical)
      .def_static("normalized", &Dictionary::normalized, py::arg("space"), py::arg("raw"))
      .def_property_readonly("size", &Dictionary::size)
      .def_property_readonly("dim", &Dictionary::dim)
      .def_property_readonly("atoms", &Dictionary::atoms)
      .def_property_readonly("space", &Dictionary::space);

  m.def("norm_A", &norm_A, py::arg("f"), py::arg("dict"));
  m.def(
      "norm_U", [](const Vector& F, const Dictionary& d) { return norm_U(DualFunctional{F}, d); }, py::arg("F"),
      py::arg("dict"));
  m.def(
      "octahedron_sup_lp", [](const Vector& F, const Dictionary& d) { return octahedron_sup_lp(DualFunctional{F}, d); },
      py::arg("F"), py::arg("dict"));

  py::class_<SparseApproximant>(m, "SparseApproximant")
      .def_readonly("support", &SparseApproximant::support)
      .def_readonly("coefficients", &SparseApproximant::coefficients)
      .def_readonly("residual_norm", &SparseApproximant::residual_norm)
      .def_readonly("history", &SparseApproximant::history)
      .def("approximant", &SparseApproximant::approximant);
  m.def(
      "wcga",
      [](const Vector& f, const Dictionary& d, int steps, double weakness) {
        WcgaOptions o;
        o.weakness = weakness;
        return wcga(f, d, steps, o);
      },
      py::arg("f"), py::arg("dict"), py::arg("m"), py::arg("weakness") = 1.0);
  m.def("best_mterm_bruteforce", &best_mterm_bruteforce, py::arg("f"), py::arg("dict"), py::arg("m"),
        py::arg("max_supports") = 1e6);
  m.def("sample_octahedron", &sample_octahedron, py::arg("dict"), py::arg("count"), py::arg("seed"));

  py::class_<MeasureSpace>(m, "MeasureSpace")
      .def_static("uniform", &MeasureSpace::uniform)
      .def_static("random", &MeasureSpace::random, py::arg("s"), py::arg("spread"), py::arg("seed"))
      .def_property_readonly("weights", &MeasureSpace::weights);
  py::class_<Subspace>(m, "Subspace")
      .def_static("random", &Subspace::random, py::arg("measure"), py::arg("N"), py::arg("seed"))
      .def_static("constants", &Subspace::constants)
      .def_property_readonly("basis", &Subspace::basis)
      .def_property_readonly("dim", &Subspace::dim)
      .def_property_readonly("points", &Subspace::points);
  m.def("m_p_direct", &m_p_direct, py::arg("sub"), py::arg("p"), py::arg("tol") = 1e-11);
  m.def("m_p_dual", &m_p_dual, py::arg("sub"), py::arg("p"), py::arg("tol") = 1e-11);

  py::enum_<EnvelopeModel>(m, "EnvelopeModel")
      .value("POWER_M", EnvelopeModel::kPowerM)
      .value("LOG_RATIO_K", EnvelopeModel::kLogRatioK);
  py::class_<FitResult>(m, "FitResult")
      .def_readonly("exponent", &FitResult::exponent)
      .def_readonly("constant", &FitResult::constant)
      .def_readonly("residual_rms", &FitResult::residual_rms)
      .def_readonly("points", &FitResult::points);
  m.def("fit_envelope", &fit_envelope, py::arg("xs"), py::arg("values"), py::arg("n"), py::arg("model"));

  m.def("_run_json", &run_json, py::arg("config_json"));
  m.def("experiment_names", &experiment_names);
  m.def("version", &version_string);
}
