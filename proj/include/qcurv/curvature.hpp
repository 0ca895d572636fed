#pragma once

#include <string>
#include <vector>

#include "qcurv/dimension.hpp"
#include "qcurv/transforms.hpp"

namespace qcurv {

/// Pointwise values of a radial quantity on a profile's grid.
struct CurvatureReport {
  std::string quantity;
  std::vector<double> r;
  std::vector<double> value;
  /// value / (natural magnitude of the terms) where that makes sense, else empty.
  std::vector<double> relative;
  double min = 0;
  double r_at_min = 0;

  double max_abs() const;
  double max_abs_relative() const;
  /// max/min - 1 over the grid (for quantities expected to be constant).
  double constancy() const;
};

/// Jet of the radial Laplacian f'' + (n-1) f'/r from the jet of f through
/// `order`; the result is valid through order - 2.
Jet7 radial_laplacian_jet(const Jet7& f, double r, int n, int order);

/// (-Delta)^3 u - cn u^p. `relative` divides by sum_k |a_k(r) u^(k)| + cn u^p,
/// the magnitudes of the terms that cancel in an exact solution.
CurvatureReport tri_laplacian_residual(const RadialProfile& profile, const DimensionParams& params);

/// Scalar curvature of g = u^{4/(n-6)} delta:
/// -(4(n-1)/(n-6)) u^{-(n-2)/(n-6)} (Delta u + (4/(n-6)) |grad u|^2 / u).
CurvatureReport scalar_curvature_radial(const RadialProfile& profile, const DimensionParams& params);

/// Largest relative disagreement between -Delta(u^b), b = (n-2)/(n-6), computed
/// from the power series of u^b, and b u^{4/(n-6)} (-Delta u - (4/(n-6)) |grad u|^2 / u).
double scalar_curvature_sign_link(const RadialProfile& profile, const DimensionParams& params);

struct Q4Report {
  CurvatureReport q4;        ///< from Delta^2 of the power series of u^a (route b)
  std::vector<double> route_a;  ///< Q4 from the expanded formula
  std::vector<double> printed;  ///< Q4 from the expansion as printed in the source
  double max_route_defect = 0;    ///< max relative |route_a - route_b|
  double max_printed_defect = 0;  ///< max relative |printed - route_b|
};

/// Fourth-order curvature (2/(n-4)) u^{-(n+4)/(n-6)} Delta^2(u^{(n-4)/(n-6)}),
/// computed by two independent routes.
Q4Report q4_curvature_radial(const RadialProfile& profile, const DimensionParams& params);

/// Expanded Delta^2(u^a) from radial jets (through order 4):
///   a u^{a-1} D2u + 4a(a-1) u^{a-2} <grad u, grad Lu> + 2a(a-1) u^{a-2} |D^2u|^2
///   + a(a-1) u^{a-2} (Lu)^2 + 4a(a-1)(a-2) u^{a-3} D^2u(grad u, grad u)
///   + 2a(a-1)(a-2) u^{a-3} |grad u|^2 Lu + a(a-1)(a-2)(a-3) u^{a-4} |grad u|^4,
/// with L the Laplacian and D2 its square.
double bilaplacian_of_power(const Jet7& u, double r, int n, double a);

struct ModicaReport {
  CurvatureReport q2;
  CurvatureReport q4;
  CurvatureReport q2_margin;  ///< Q2(u) - sqrt((n-6)/n) u^{n/(n-6)}
  CurvatureReport q4_margin;  ///< Q4(u) - sqrt((n-6)/n) u^{n/(n-6)}
  std::vector<double> q4_printed;  ///< literal printed Q4(u), reported only
};

/// Q2(u) = -Delta u - (4/(n-6)) |grad u|^2 / u and
/// Q4(u) = Delta^2(u^a) / (a u^{a-1}), a = (n-4)/(n-6), with their margins
/// against sqrt((n-6)/n) u^{n/(n-6)}. Report only.
ModicaReport modica_quantities(const RadialProfile& profile, const DimensionParams& params);

/// Mean curvature (trace of the second fundamental form) of the sphere
/// |x| = r in the round metric 4 (1 + |x|^2)^-2 delta, positive for small
/// spheres about the origin: (n-1)(1 - r^2) / (2r).
double geodesic_sphere_mean_curvature(double r, int n);

/// The same quantity as d(log area)/ds along the unit-normal flow, by
/// central differences in r (independent check).
double geodesic_sphere_mean_curvature_fd(double r, int n, double h = 1e-4);

}  // namespace qcurv
