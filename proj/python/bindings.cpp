#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "szego/diagnostics.hpp"
#include "szego/ensembles.hpp"
#include "szego/limitlaw.hpp"
#include "szego/spectral.hpp"

namespace py = pybind11;
using namespace szego;

namespace {

CoeffSeq coeffs_from_dict(const std::map<int, Complex>& entries) {
  return CoeffSeq::from_offsets(entries);
}

ScalarField field_from_kwargs(const std::string& kind, const py::kwargs& kwargs) {
  if (kind == "const") return ScalarField::constant(kwargs["value"].cast<Complex>());
  if (kind == "poly") return ScalarField::poly(kwargs["coeffs"].cast<std::vector<Complex>>());
  if (kind == "cos")
    return ScalarField::cosine(kwargs.contains("amplitude") ? kwargs["amplitude"].cast<Complex>()
                                                            : Complex(1.0, 0.0),
                               kwargs.contains("freq") ? kwargs["freq"].cast<double>() : 1.0,
                               kwargs.contains("phase") ? kwargs["phase"].cast<double>() : 0.0);
  if (kind == "step")
    return ScalarField::step(kwargs["breaks"].cast<std::vector<double>>(),
                             kwargs["values"].cast<std::vector<Complex>>());
  if (kind == "grid") return ScalarField::grid(kwargs["values"].cast<std::vector<Complex>>());
  throw std::invalid_argument("unknown field kind: " + kind);
}

}  // namespace

PYBIND11_MODULE(_szego, m) {
  m.doc() = "matrix sequences, spectral statistics and their predicted limits";

  py::register_exception<SolverError>(m, "SolverError");

  py::class_<CoeffSeq>(m, "CoeffSeq")
      .def(py::init(&coeffs_from_dict), py::arg("entries"),
           "build from a {offset: value} mapping")
      .def_property_readonly("band", &CoeffSeq::band)
      .def("coeff", &CoeffSeq::coeff, py::arg("k"))
      .def("wiener_norm", &CoeffSeq::wiener_norm)
      .def("hermitian_pair", &CoeffSeq::hermitian_pair, py::arg("tol") = 1e-12)
      .def("__call__", [](const CoeffSeq& c, double t) { return eval_fourier_series(c, t); },
           py::arg("t"));

  py::class_<ScalarField>(m, "ScalarField")
      .def(py::init(&field_from_kwargs), py::arg("kind"))
      .def("__call__", [](const ScalarField& f, double s) { return f(s); }, py::arg("s"));

  py::class_<DiagonalSymbol>(m, "DiagonalSymbol")
      .def(py::init<int, std::vector<ScalarField>, bool>(), py::arg("band"), py::arg("funcs"),
           py::arg("hermitian") = false)
      .def_property_readonly("band", &DiagonalSymbol::band)
      .def_property_readonly("hermitian", &DiagonalSymbol::hermitian)
      .def("coeff", &DiagonalSymbol::coeff, py::arg("k"), py::arg("s"))
      .def("value", &DiagonalSymbol::value, py::arg("s"), py::arg("t"))
      .def("sup_norm_sum", [](const DiagonalSymbol& sym, int grid) { return sup_norm_sum(sym, grid); },
           py::arg("grid") = 1025);

  m.def("fourier_coeffs_of_symbol", &fourier_coeffs_of_symbol, py::arg("a"), py::arg("s"),
        py::arg("band"), py::arg("nodes"));

  py::enum_<KmsSampling>(m, "KmsSampling")
      .value("midpoint", KmsSampling::kMidpoint)
      .value("uniform", KmsSampling::kUniformPartition);

  py::class_<RateRule>(m, "RateRule")
      .def_static("sqrt", &RateRule::sqrt)
      .def_static("log", &RateRule::log)
      .def_static("power", &RateRule::power, py::arg("alpha"))
      .def_static("zero", &RateRule::zero)
      .def("__call__", [](const RateRule& r, long n) { return r(n); }, py::arg("n"));

  py::class_<DiagMatrix>(m, "DiagMatrix")
      .def_property_readonly("n", &DiagMatrix::size)
      .def_property_readonly("band", &DiagMatrix::band)
      .def_property_readonly("hermitian", &DiagMatrix::hermitian)
      .def("diag", &DiagMatrix::diag_get, py::arg("k"), py::arg("j"))
      .def("to_dense", &DiagMatrix::to_dense)
      .def_static("from_dense", &DiagMatrix::from_dense, py::arg("dense"), py::arg("tol") = 1e-12);

  m.def("build_toeplitz", &build_toeplitz, py::arg("coeffs"), py::arg("n"));
  m.def("build_kms", &build_kms, py::arg("symbol"), py::arg("sampling"), py::arg("n"));
  m.def(
      "build_binned_constants",
      [](const std::vector<double>& constants, const RateRule& rule, int band,
         const std::vector<ScalarField>& maps, long n, std::uint64_t seed) {
        BinnedConstantsSpec spec;
        spec.constants = constants;
        spec.r_rule = rule;
        spec.band = band;
        spec.maps = maps;
        return build_binned_constants(spec, n, seed);
      },
      py::arg("constants"), py::arg("r_rule"), py::arg("band"), py::arg("maps"), py::arg("n"),
      py::arg("seed") = 0);
  m.def("build_jacobi", &build_jacobi, py::arg("offdiag"), py::arg("diag"), py::arg("n"));
  m.def("perturb_density_one", &perturb_density_one, py::arg("base"), py::arg("rate"),
        py::arg("magnitude"), py::arg("seed"), py::arg("n"));
  m.def("band_truncate", &band_truncate, py::arg("a"), py::arg("band"));

  m.def("vmv_variation", &vmv_variation, py::arg("a"), py::arg("k"));
  m.def("shift_defect", &shift_defect, py::arg("a"), py::arg("offsets"), py::arg("shifts"));
  m.def("gershgorin_bound", &gershgorin_bound, py::arg("a"));
  m.def("singular_values", &singular_values, py::arg("a"));
  m.def("trace_norm", &trace_norm, py::arg("a"));
  m.def("spectral_norm", &spectral_norm, py::arg("a"));

  py::class_<SpectralSample>(m, "SpectralSample")
      .def_readonly("n", &SpectralSample::n)
      .def_readonly("hermitian", &SpectralSample::hermitian)
      .def_readonly("values", &SpectralSample::values)
      .def("reals", &SpectralSample::reals);

  m.def("eigenvalues", &eigenvalues, py::arg("a"), py::arg("tol") = 1e-9);
  m.def("moment_trace_dense", &moment_trace_dense, py::arg("a"), py::arg("r"), py::arg("s"));
  m.def(
      "moment_trace_diagonal",
      [](const DiagMatrix& a, int r, int s) { return moment_trace_diagonal(a, r, s); },
      py::arg("a"), py::arg("r"), py::arg("s"));
  m.def("test_functional_trace", &test_functional_trace, py::arg("a"), py::arg("phi"));
  m.def("empirical_cdf", &empirical_cdf, py::arg("sample"), py::arg("grid"));

  py::class_<TestFunction>(m, "TestFunction")
      .def_static("power", &TestFunction::power, py::arg("m"))
      .def_static("polynomial",
                  static_cast<TestFunction (*)(std::vector<double>)>(&TestFunction::polynomial),
                  py::arg("coeffs"))
      .def_static("bump", &TestFunction::bump, py::arg("center"), py::arg("width"),
                  py::arg("height") = 1.0)
      .def_static("sigmoid", &TestFunction::sigmoid, py::arg("center"), py::arg("width"))
      .def("__call__", [](const TestFunction& f, double x) { return f(x); }, py::arg("x"));

  py::class_<WeightedCoeffs>(m, "WeightedCoeffs")
      .def(py::init([](const CoeffSeq& c, double w) { return WeightedCoeffs{c, w}; }),
           py::arg("coeffs"), py::arg("weight"))
      .def_readonly("weight", &WeightedCoeffs::weight);

  py::class_<LimitLaw>(m, "LimitLaw")
      .def_static("atoms", &LimitLaw::atoms, py::arg("atoms"), py::arg("t_nodes") = 0)
      .def_static("dirac", &LimitLaw::dirac, py::arg("coeffs"), py::arg("t_nodes") = 0)
      .def_static("pushforward", &LimitLaw::pushforward, py::arg("symbol"),
                  py::arg("s_nodes") = 1024, py::arg("t_nodes") = 0)
      .def_static("pushforward_atoms", &LimitLaw::pushforward_atoms, py::arg("symbol"),
                  py::arg("s_atoms"), py::arg("t_nodes") = 0)
      .def_property_readonly("band", &LimitLaw::band)
      .def_property_readonly("t_nodes", &LimitLaw::t_nodes)
      .def("hermitian", &LimitLaw::hermitian, py::arg("tol") = 1e-9)
      .def("coeff_mean", &LimitLaw::coeff_mean, py::arg("k"))
      .def("coeff_corr", &LimitLaw::coeff_corr, py::arg("k"), py::arg("l"));

  m.def("predicted_moment", &predicted_moment, py::arg("law"), py::arg("r"), py::arg("s"));
  m.def("predicted_phi_integral", &predicted_phi_integral, py::arg("law"), py::arg("phi"),
        py::arg("t_nodes") = 0);
  m.def("kms_phi_integral", &kms_phi_integral, py::arg("symbol"), py::arg("phi"),
        py::arg("s_nodes"), py::arg("t_nodes"));
  m.def("empirical_diag_discrepancy", &empirical_diag_discrepancy, py::arg("a"), py::arg("window"),
        py::arg("target"));
  m.def("nevai_limit", &nevai_limit, py::arg("coeffs"), py::arg("phi"));

  py::class_<DensityModel>(m, "DensityModel")
      .def(py::init<std::vector<double>, std::vector<std::pair<double, double>>>(),
           py::arg("f_poly"), py::arg("nu_atoms") = std::vector<std::pair<double, double>>{})
      .def_property_readonly("support_lo", &DensityModel::support_lo)
      .def_property_readonly("support_hi", &DensityModel::support_hi)
      .def("f", &DensityModel::f, py::arg("s"))
      .def("f_inverse", &DensityModel::f_inverse, py::arg("x"));

  m.def("schrodinger_density", &schrodinger_density, py::arg("model"), py::arg("x"),
        py::arg("clip") = 1e-12);
  m.def("density_integral", py::overload_cast<const DensityModel&>(&density_integral),
        py::arg("model"));
  m.def("predicted_cdf",
        py::overload_cast<const DensityModel&, const std::vector<double>&>(&predicted_cdf),
        py::arg("model"), py::arg("grid"));
  m.def("predicted_law_cdf",
        py::overload_cast<const LimitLaw&, const std::vector<double>&>(&predicted_cdf),
        py::arg("law"), py::arg("grid"));
  m.def("ks_distance", &ks_distance, py::arg("a"), py::arg("b"));
}
