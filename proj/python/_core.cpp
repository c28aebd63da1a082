#include <sstream>

#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "nlsob/cli.hpp"
#include "nlsob/experiments.hpp"
#include "nlsob/functional.hpp"
#include "nlsob/manifold.hpp"
#include "nlsob/report.hpp"
#include "nlsob/riesz.hpp"
#include "nlsob/spectrum.hpp"

namespace py = pybind11;
using namespace nlsob;

namespace {

py::array_t<double> to_array(const std::vector<double>& v) { return py::array_t<double>(v.size(), v.data()); }

// Reports cross the boundary as JSON text; the Python side parses them.
std::string json_text(const Json& j) { return j.dump(); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Nonlocal Sobolev stability toolkit: radial fields, Riesz potentials, deficits and spectra.";
  m.attr("__version__") = NLSOB_VERSION;

  py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);
  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);

  py::class_<SharpConstants>(m, "SharpConstants")
      .def_readonly("c_hls", &SharpConstants::c_hls)
      .def_readonly("s_sob", &SharpConstants::s_sob)
      .def_readonly("s_hls", &SharpConstants::s_hls)
      .def_readonly("bubble_amp", &SharpConstants::bubble_amp);

  py::class_<Params>(m, "Params")
      .def(py::init(&make_params), py::arg("N"), py::arg("alpha"))
      .def_readonly("N", &Params::N)
      .def_readonly("alpha", &Params::alpha)
      .def_readonly("two_star_alpha", &Params::two_star_alpha)
      .def_readonly("two_star", &Params::two_star)
      .def_readonly("q_weak", &Params::q_weak)
      .def_readonly("constants", &Params::constants)
      .def("__repr__", [](const Params& p) {
        std::ostringstream s;
        s << "Params(N=" << p.N << ", alpha=" << p.alpha << ")";
        return s.str();
      });

  m.def("hls_sharp_constant", &hls_sharp_constant, py::arg("params"));
  m.def("sobolev_constant", &sobolev_constant, py::arg("N"), py::arg("n") = 4096);
  m.def("sphere_area", &sphere_area, py::arg("N"));

  py::class_<RadialGrid>(m, "RadialGrid")
      .def_property_readonly("nodes", [](const RadialGrid& g) { return to_array(g.nodes()); })
      .def_property_readonly("r_min", &RadialGrid::r_min)
      .def_property_readonly("r_max", &RadialGrid::r_max)
      .def("__len__", &RadialGrid::size)
      .def("weights", [](const RadialGrid& g, double k) { return to_array(g.weights(k)); }, py::arg("k"));
  m.def("log_grid", &make_log_grid, py::arg("r_min") = kDefaultRMin, py::arg("r_max") = kDefaultRMax,
        py::arg("n") = kDefaultGridN);

  py::class_<RadialField>(m, "RadialField")
      .def(py::init([](const RadialGrid& g, py::array_t<double, py::array::c_style | py::array::forcecast> v,
                       double tail, double head) {
             if (v.ndim() != 1) throw ValidationError("values must be one dimensional");
             return RadialField(g, std::vector<double>(v.data(), v.data() + v.size()), tail, head);
           }),
           py::arg("grid"), py::arg("values"), py::arg("tail_exponent"), py::arg("head_value"))
      .def_property_readonly("grid", &RadialField::grid)
      .def_property_readonly("values", [](const RadialField& f) { return to_array(f.values()); })
      .def_property_readonly("tail_exponent", &RadialField::tail_exponent)
      .def_property_readonly("head_value", &RadialField::head_value)
      .def("__call__", &RadialField::at, py::arg("r"))
      .def("__len__", &RadialField::size)
      .def("__add__", [](const RadialField& a, const RadialField& b) { return a + b; })
      .def("__sub__", [](const RadialField& a, const RadialField& b) { return a - b; })
      .def("__rmul__", [](const RadialField& a, double s) { return s * a; })
      .def("__mul__", [](const RadialField& a, double s) { return s * a; });

  m.def("sample", &sample, py::arg("grid"), py::arg("fn"), py::arg("tail_exponent"), py::arg("head_value"));
  m.def("read_csv", py::overload_cast<const std::string&>(&read_csv), py::arg("path"));
  m.def("write_csv", py::overload_cast<const RadialField&, const std::string&>(&write_csv), py::arg("field"),
        py::arg("path"));

  m.def(
      "bubble", [](const Params& p, double c, double lambda, const RadialGrid& g) { return bubble(p, {c, lambda, {}}, g); },
      py::arg("params"), py::arg("c") = 1.0, py::arg("lam") = 1.0, py::arg("grid"));
  m.def("riesz_potential", &riesz_potential, py::arg("f"), py::arg("params"), py::arg("ell") = 0);
  m.def("hls_energy", &hls_energy, py::arg("u"), py::arg("params"));
  m.def("el_residual", &el_residual, py::arg("u"), py::arg("params"));
  m.def("weak_norm", &weak_norm, py::arg("u"), py::arg("N"), py::arg("R"), py::arg("q"));
  m.def("strong_norm", &strong_norm, py::arg("u"), py::arg("N"), py::arg("q"));
  m.def("deficit", [](const RadialField& u, const Params& p) { return json_text(to_json(deficit(u, p))); },
        py::arg("u"), py::arg("params"));
  m.def(
      "dist_to_manifold",
      [](const RadialField& u, const Params& p) {
        const auto d = dist_to_manifold(u, p);
        return py::make_tuple(d.best.c, d.best.lambda, d.d, d.w);
      },
      py::arg("u"), py::arg("params"));

  m.def(
      "sector_spectrum",
      [](const Params& p, int ell, const RadialGrid& g, int k) {
        const auto r = solve_generalized(assemble_sector(p, ell, g), k);
        return py::make_tuple(to_array(r.eigenvalues), json_text(to_json(r)));
      },
      py::arg("params"), py::arg("ell"), py::arg("grid"), py::arg("k") = 8);
  m.def(
      "spectral_gap", [](const Params& p, const RadialGrid& g, int k) { return json_text(to_json(spectral_gap(p, g, k).merged)); },
      py::arg("params"), py::arg("grid"), py::arg("per_sector") = 8);
  m.def("harmonic_multiplicity", &harmonic_multiplicity, py::arg("N"), py::arg("ell"));

  m.def("tail_energy", &tail_energy, py::arg("params"), py::arg("R"), py::arg("lam"));
  m.def("tail_energy_quadrature", &tail_energy_quadrature, py::arg("params"), py::arg("R"), py::arg("lam"));
  m.def(
      "bounded_domain_experiment",
      [](const Params& p, double R, const std::vector<double>& lambdas) {
        return json_text(to_json(bounded_domain_experiment(p, R, lambdas)));
      },
      py::arg("params"), py::arg("R"), py::arg("lambdas"));

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        int code;
        {
          py::gil_scoped_release release;
          code = run_cli(args, out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"));
}
