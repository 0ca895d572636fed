#pragma once

#include <array>
#include <span>
#include <vector>

#include "qcurv/dimension.hpp"

namespace qcurv {

struct DelaunayOrbit;

/// Derivatives 0..6 at one point; entries past a profile's jet order are unused.
using Jet7 = std::array<double, 7>;

/// Samples of a radial conformal factor u(r), g = u^{4/(n-6)} delta.
struct RadialProfile {
  int n = 0;
  std::vector<double> r;  ///< strictly increasing, positive
  std::vector<double> u;  ///< positive
  /// Radial derivatives u, u', ..., u^(order) at each node; empty when absent.
  std::vector<Jet7> jets;
  int order = -1;  ///< highest derivative stored in `jets`, -1 for none

  std::size_t size() const { return r.size(); }
  bool has_jets(int min_order = 0) const { return order >= min_order && jets.size() == r.size(); }
  /// Throws DomainError unless the grid/values/jets invariants hold.
  void validate() const;
};

/// Cylinder picture v(t) = r^gamma u(r), t = -ln r. Samples are stored in the
/// order of the source radii, so t decreases along the arrays.
struct CylinderProfile {
  int n = 0;
  std::vector<double> t;
  std::vector<double> v;
  std::vector<Jet7> jets;  ///< d^k v / dt^k
  int order = -1;

  std::size_t size() const { return t.size(); }
};

/// Logarithmically spaced radii r_min..r_max (inclusive).
std::vector<double> log_grid(double r_min, double r_max, std::size_t count);

/// v(t_i) = r_i^gamma u(r_i), t_i = -ln r_i; jets by the chain rule.
CylinderProfile emden_fowler_forward(const RadialProfile& profile, const DimensionParams& params);
/// u(r_i) = r_i^-gamma v(t_i), r_i = e^-t_i; jets by the chain rule.
RadialProfile emden_fowler_inverse(const CylinderProfile& cylinder, const DimensionParams& params);

/// u_lambda(r) = lambda^gamma u(lambda r), sampled on the grid r_i / lambda.
RadialProfile scaling_law(const RadialProfile& profile, double lambda, const DimensionParams& params);

/// (2 eps / (1 + eps^2 d^2))^gamma, the bubble centered at distance d.
double spherical_solution(double distance, double eps, const DimensionParams& params);

/// Bubble u_{0,eps} on `grid` with exact jets through order 6.
RadialProfile spherical_profile(const DimensionParams& params, std::span<const double> grid, double eps = 1.0);
/// c r^-gamma on `grid` with exact jets through order 6.
RadialProfile cylinder_profile(const DimensionParams& params, std::span<const double> grid, double c);

/// u(r) = r^-gamma v_eps(ln r + T) from the orbit's dense output, jets
/// through order 6 (v^(6) from the ODE). Throws DomainError for an
/// unconverged orbit.
RadialProfile delaunay_profile(const DelaunayOrbit& orbit, double phase, std::span<const double> grid,
                               const DimensionParams& params);

/// Radial derivatives u^(k)(r), k <= order, from the derivatives w^(j) of
/// w(s) = r^gamma u(r) in s = ln r.
Jet7 radial_jet_from_log(const Jet7& w, double r, double gamma, int order);
/// Inverse of radial_jet_from_log.
Jet7 log_jet_from_radial(const Jet7& u, double r, double gamma, int order);

}  // namespace qcurv
