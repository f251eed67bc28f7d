#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <stdexcept>
#include <string>
#include <vector>

#include "axeuler/biot_savart.hpp"
#include "axeuler/core_fields.hpp"
#include "axeuler/kernel.hpp"
#include "axeuler/lorentz.hpp"
#include "axeuler/simulator.hpp"
#include "axeuler/verify.hpp"

namespace py = pybind11;
using namespace axeuler;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

// (nr, nz) array on `grid`, z fastest as in the C++ storage order.
ScalarField field_from(const CylGrid& grid, const Array& a) {
  if (a.ndim() != 2 || static_cast<std::size_t>(a.shape(0)) != grid.nr() ||
      static_cast<std::size_t>(a.shape(1)) != grid.nz())
    throw std::invalid_argument("expected an array of shape (nr, nz)");
  return ScalarField(grid, std::vector<double>(a.data(), a.data() + a.size()));
}

Array to_array(const std::vector<double>& v, const CylGrid& grid) {
  Array out({grid.nr(), grid.nz()});
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

std::vector<Point> points_from(const Array& rz) {
  if (rz.ndim() != 2 || rz.shape(1) != 2) throw std::invalid_argument("expected targets of shape (n, 2)");
  std::vector<Point> out;
  for (py::ssize_t k = 0; k < rz.shape(0); ++k) out.push_back({rz.at(k, 0), rz.at(k, 1)});
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Axisymmetric swirl-free Euler flow: kernels, Lorentz norms, Biot-Savart and vortex particles.";

  py::class_<CylGrid>(m, "CylGrid")
      .def(py::init<double, double, double, std::size_t, std::size_t>(), py::arg("r_max"), py::arg("z_min"),
           py::arg("z_max"), py::arg("nr"), py::arg("nz"))
      .def_property_readonly("nr", &CylGrid::nr)
      .def_property_readonly("nz", &CylGrid::nz)
      .def_property_readonly("hr", &CylGrid::hr)
      .def_property_readonly("hz", &CylGrid::hz)
      .def_property_readonly("r", [](const CylGrid& g) {
        std::vector<double> r(g.nr());
        for (std::size_t i = 0; i < g.nr(); ++i) r[i] = g.r(i);
        return r;
      })
      .def_property_readonly("z", [](const CylGrid& g) {
        std::vector<double> z(g.nz());
        for (std::size_t j = 0; j < g.nz(); ++j) z[j] = g.z(j);
        return z;
      })
      .def("__repr__", [](const CylGrid& g) {
        return "CylGrid(r_max=" + std::to_string(g.r_max()) + ", z=[" + std::to_string(g.z_min()) + ", " +
               std::to_string(g.z_max()) + "], nr=" + std::to_string(g.nr()) + ", nz=" + std::to_string(g.nz()) + ")";
      });

  m.def("h_closed", py::overload_cast<double>(&kernel::h_closed), py::arg("s"));
  m.def("h_quad", &kernel::h_quad, py::arg("s"), py::arg("order") = 64);
  m.def("g_kernel", &kernel::g_kernel, py::arg("a"), py::arg("b"), py::arg("r"), py::arg("z"));

  m.def(
      "gaussian_vorticity",
      [](const CylGrid& g, int d) { return to_array(gaussian_test_vorticity(g, Dimension(d)).values, g); },
      py::arg("grid"), py::arg("d") = 4);
  m.def(
      "gaussian_velocity",
      [](double r, double z, int d) {
        const auto u = gaussian_velocity(r, z, Dimension(d));
        return py::make_tuple(u.ur, u.uz);
      },
      py::arg("r"), py::arg("z"), py::arg("d") = 4);

  m.def(
      "lorentz_quasinorm",
      [](const std::vector<double>& values, const std::vector<double>& weights, double p, double q) {
        return lorentz::lorentz_quasinorm(lorentz::WeightedSamples(values, weights), {p, q});
      },
      py::arg("values"), py::arg("weights"), py::arg("p"), py::arg("q"),
      "L^{p,q} quasinorm of a step function; q may be math.inf.");
  m.def(
      "field_quasinorm",
      [](const CylGrid& g, const Array& values, double p, double q, int d) {
        return lorentz::lorentz_quasinorm(lorentz::samples_from_field(field_from(g, values), Dimension(d)), {p, q});
      },
      py::arg("grid"), py::arg("values"), py::arg("p"), py::arg("q"), py::arg("d") = 4);
  m.def(
      "weak_norm_of_g",
      [](double a, double b, std::size_t resolution, double extent) {
        return lorentz::weak_norm_of_g(a, b, resolution, extent).value;
      },
      py::arg("a") = 1.0, py::arg("b") = 0.0, py::arg("resolution") = 512, py::arg("extent") = 8.0);
  m.def(
      "decay_check",
      [](const CylGrid& g, const Array& omega) {
        const auto r = lorentz::decay_hypothesis_check(field_from(g, omega));
        py::dict out;
        out["passed"] = r.passed;
        out["reason"] = r.reason;
        out["c_inverse_r"] = r.c_inverse_r;
        out["c_decay"] = r.c_decay;
        out["l21"] = r.l21;
        return out;
      },
      py::arg("grid"), py::arg("omega"));

  m.def(
      "reconstruct",
      [](const CylGrid& g, const Array& omega, const Array& targets, double epsilon, int d) {
        const kernel::KernelParams params(Dimension(d), 32, epsilon);
        const auto v = biot_savart::velocity_from_vorticity({field_from(g, omega), points_from(targets), params});
        return py::make_tuple(v.ur, v.uz);
      },
      py::arg("grid"), py::arg("omega"), py::arg("targets"), py::arg("epsilon"), py::arg("d") = 4,
      "Velocity (ur, uz) at targets of shape (n, 2); epsilon = 0 excludes the target cell.");

  m.def(
      "simulate",
      [](const std::string& preset, const CylGrid& g, double dt, double t_end, std::size_t diagnostics_every,
         double envelope_constant) {
        simulator::SimulationConfig c(simulator::preset_initial_data(preset, g), dt, t_end,
                                      kernel::KernelParams(Dimension(4), 32, std::max(g.hr(), g.hz())));
        c.diagnostics_every = diagnostics_every;
        c.envelope_constant = envelope_constant;
        const auto res = simulator::run(c);
        py::list rows;
        for (const auto& r : res.records) {
          py::dict d;
          d["step"] = r.step;
          d["t"] = r.t;
          d["omega_sup"] = r.omega_sup;
          d["l21"] = r.l21;
          d["ur_over_r_sup"] = r.ur_over_r_sup;
          d["envelope"] = r.envelope;
          d["kinetic"] = r.kinetic;
          d["axis_reflections"] = r.axis_reflections;
          rows.append(d);
        }
        return rows;
      },
      py::arg("preset"), py::arg("grid"), py::arg("dt"), py::arg("t_end"), py::arg("diagnostics_every") = 1,
      py::arg("envelope_constant") = 0.0);

  m.def(
      "verify",
      [](const std::string& lemma, std::size_t resolution, std::size_t corpus_size, std::size_t corpus_resolution,
         std::uint64_t seed) {
        verify::VerifyOptions o;
        o.lemma = lemma;
        o.resolution = resolution;
        o.corpus_size = corpus_size;
        o.corpus_resolution = corpus_resolution;
        o.seed = seed;
        return verify::report_to_json(verify::run_verification(o));
      },
      py::arg("lemma") = "", py::arg("resolution") = 2048, py::arg("corpus_size") = 50,
      py::arg("corpus_resolution") = 128, py::arg("seed") = 7, "JSON report of the verification checks.");
}
