#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qcurv/curvature.hpp"
#include "qcurv/dimension.hpp"
#include "qcurv/errors.hpp"
#include "qcurv/integrator.hpp"
#include "qcurv/invariants.hpp"
#include "qcurv/shooting.hpp"
#include "qcurv/transforms.hpp"

namespace py = pybind11;
using namespace qcurv;

namespace {

ShootingOptions shooting_options(double tol, int max_iterations) {
  ShootingOptions o;
  o.tol = tol;
  o.max_iterations = max_iterations;
  return o;
}

py::dict report_dict(const CurvatureReport& r) {
  py::dict d;
  d["quantity"] = r.quantity;
  d["r"] = r.r;
  d["value"] = r.value;
  d["min"] = r.min;
  d["r_at_min"] = r.r_at_min;
  return d;
}

RadialProfile make_profile(int n, std::vector<double> r, std::vector<double> u,
                           std::vector<Jet7> jets, int order) {
  RadialProfile p;
  p.n = n;
  p.r = std::move(r);
  p.u = std::move(u);
  p.jets = std::move(jets);
  p.order = p.jets.empty() ? -1 : order;
  p.validate();
  return p;
}

}  // namespace

PYBIND11_MODULE(_qcurv, m) {
  m.doc() = "Radial sixth-order constant Q-curvature: Delaunay orbits, invariants, curvature";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  auto numerical = py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);
  py::register_exception<ConvergenceError>(m, "ConvergenceError", numerical.ptr());
  py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);

  py::class_<DimensionParams>(m, "DimensionParams")
      .def_readonly("n", &DimensionParams::n)
      .def_readonly("gamma", &DimensionParams::gamma)
      .def_readonly("p", &DimensionParams::p)
      .def_readonly("Qn", &DimensionParams::Qn)
      .def_readonly("cn", &DimensionParams::cn)
      .def_readonly("K0", &DimensionParams::K0)
      .def_readonly("K2", &DimensionParams::K2)
      .def_readonly("K4", &DimensionParams::K4)
      .def_readonly("mu1", &DimensionParams::mu1)
      .def_readonly("mu2", &DimensionParams::mu2)
      .def_readonly("mu3", &DimensionParams::mu3)
      .def_readonly("eps_star", &DimensionParams::eps_star)
      .def_readonly("omega", &DimensionParams::omega)
      .def("__repr__", [](const DimensionParams& p) {
        return "<DimensionParams n=" + std::to_string(p.n) + ">";
      });

  m.def("make_params", &make_params, py::arg("n"));
  m.def("sphere_area", &sphere_area, py::arg("k"));
  m.def("linear_frequency_squared", &linear_frequency_squared, py::arg("params"));

  py::enum_<IntegrationStatus>(m, "IntegrationStatus")
      .value("Completed", IntegrationStatus::Completed)
      .value("TerminalEvent", IntegrationStatus::TerminalEvent)
      .value("PositivityEvent", IntegrationStatus::PositivityEvent)
      .value("StepUnderflow", IntegrationStatus::StepUnderflow)
      .value("BlowUp", IntegrationStatus::BlowUp)
      .value("MaxSteps", IntegrationStatus::MaxSteps);

  py::class_<Trajectory>(m, "Trajectory")
      .def_property_readonly("t_begin", &Trajectory::t_begin)
      .def_property_readonly("t_end", &Trajectory::t_end)
      .def_property_readonly("status", &Trajectory::status)
      .def("__len__", &Trajectory::size)
      .def("jet_at", &Trajectory::jet_at, py::arg("t"))
      .def("times", [](const Trajectory& tr) {
        std::vector<double> t;
        for (const auto& s : tr.nodes()) t.push_back(s.t);
        return t;
      });

  m.def(
      "integrate",
      [](const DimensionParams& params, double t0, const Jet6& jet, double t_end, double tol_abs,
         double tol_rel, std::optional<double> coefficient) {
        IntegrateOptions o;
        o.tol = {tol_abs, tol_rel};
        o.coefficient = coefficient;
        return integrate(params, {t0, jet}, t_end, o);
      },
      py::arg("params"), py::arg("t0"), py::arg("jet"), py::arg("t_end"), py::arg("tol_abs") = 1e-12,
      py::arg("tol_rel") = 1e-10, py::arg("coefficient") = py::none());

  py::class_<DelaunayOrbit>(m, "DelaunayOrbit")
      .def_readonly("n", &DelaunayOrbit::n)
      .def_readonly("eps0", &DelaunayOrbit::eps0)
      .def_readonly("eps2", &DelaunayOrbit::eps2)
      .def_readonly("eps4", &DelaunayOrbit::eps4)
      .def_readonly("period", &DelaunayOrbit::period)
      .def_readonly("half_time", &DelaunayOrbit::half_time)
      .def_readonly("energy", &DelaunayOrbit::energy)
      .def_readonly("residual", &DelaunayOrbit::residual)
      .def_readonly("iterations", &DelaunayOrbit::iterations)
      .def_readonly("converged", &DelaunayOrbit::converged)
      .def_readonly("constant", &DelaunayOrbit::constant)
      .def_readonly("periodicity_defect", &DelaunayOrbit::periodicity_defect)
      .def_readonly("trajectory", &DelaunayOrbit::trajectory)
      .def("jet_at", &DelaunayOrbit::jet_at, py::arg("t"));

  m.def(
      "find_orbit",
      [](const DimensionParams& params, double eps0, double tol, int max_iterations) {
        return find_orbit(params, eps0, std::nullopt, shooting_options(tol, max_iterations));
      },
      py::arg("params"), py::arg("eps0"), py::arg("tol") = 1e-9, py::arg("max_iterations") = 50);

  m.def(
      "sweep",
      [](const DimensionParams& params, const std::vector<double>& grid, double tol) {
        const SweepResult s = continuation_sweep(params, grid, shooting_options(tol, 50));
        if (!s.complete) throw NumericalError("sweep stopped: " + s.diagnostics);
        return s.orbits;
      },
      py::arg("params"), py::arg("grid"), py::arg("tol") = 1e-9);

  m.def(
      "hamiltonian",
      [](const DimensionParams& params, const Jet6& jet, std::optional<double> A) {
        return A ? hamiltonian_rescaled(params, *A, jet) : hamiltonian_rad(params, jet);
      },
      py::arg("params"), py::arg("jet"), py::arg("A") = py::none());
  m.def("hamiltonian_cylinder", &hamiltonian_cylinder, py::arg("params"));

  m.def(
      "pohozaev",
      [](const DimensionParams& params, const DelaunayOrbit& orbit) {
        const PohozaevValue v = pohozaev_cyl(params, orbit.trajectory);
        py::dict d;
        d["h_rad"] = v.h_rad;
        d["p_cyl"] = v.p_cyl;
        d["drift"] = v.drift;
        return d;
      },
      py::arg("params"), py::arg("orbit"));
  m.def(
      "pohozaev_of_necksize",
      [](const DimensionParams& params, double eps0) { return pohozaev_of_necksize(params, eps0); },
      py::arg("params"), py::arg("eps0"));

  py::class_<RadialProfile>(m, "RadialProfile")
      .def(py::init(&make_profile), py::arg("n"), py::arg("r"), py::arg("u"),
           py::arg("jets") = std::vector<Jet7>{}, py::arg("order") = 6)
      .def_readonly("n", &RadialProfile::n)
      .def_readonly("r", &RadialProfile::r)
      .def_readonly("u", &RadialProfile::u)
      .def_readonly("jets", &RadialProfile::jets)
      .def_readonly("order", &RadialProfile::order);

  m.def("log_grid", &log_grid, py::arg("r_min"), py::arg("r_max"), py::arg("count"));
  m.def(
      "spherical_profile",
      [](const DimensionParams& params, const std::vector<double>& grid, double eps) {
        return spherical_profile(params, grid, eps);
      },
      py::arg("params"), py::arg("grid"), py::arg("eps") = 1.0);
  m.def("spherical_solution", &spherical_solution, py::arg("distance"), py::arg("eps"), py::arg("params"));

  m.def(
      "tri_laplacian_residual",
      [](const RadialProfile& p, const DimensionParams& params) {
        const CurvatureReport r = tri_laplacian_residual(p, params);
        py::dict d = report_dict(r);
        d["relative"] = r.relative;
        return d;
      },
      py::arg("profile"), py::arg("params"));
  m.def(
      "scalar_curvature",
      [](const RadialProfile& p, const DimensionParams& params) {
        return report_dict(scalar_curvature_radial(p, params));
      },
      py::arg("profile"), py::arg("params"));
  m.def(
      "q4_curvature",
      [](const RadialProfile& p, const DimensionParams& params) {
        const Q4Report q = q4_curvature_radial(p, params);
        py::dict d = report_dict(q.q4);
        d["route_a"] = q.route_a;
        d["max_route_defect"] = q.max_route_defect;
        d["max_printed_defect"] = q.max_printed_defect;
        return d;
      },
      py::arg("profile"), py::arg("params"));
  m.def("geodesic_sphere_mean_curvature", &geodesic_sphere_mean_curvature, py::arg("r"), py::arg("n"));
}
