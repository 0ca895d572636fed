#pragma once

#include <optional>
#include <span>
#include <vector>

#include "qcurv/dimension.hpp"
#include "qcurv/integrator.hpp"
#include "qcurv/shooting.hpp"
#include "qcurv/transforms.hpp"

namespace qcurv {

/// Radial Hamiltonian of the cylinder ODE,
///   1/2 v3^2 + K4/2 v2^2 + K2/2 v1^2 - K0/2 v^2 + v5 v1 - v4 v2 - K4 v3 v1 + F(v),
/// F(v) = cn (n-6)/(2n) v^(2n/(n-6)). Conserved along solutions; the angular
/// part vanishes for radial data.
double hamiltonian_rad(const DimensionParams& params, const CylState& state);
double hamiltonian_rad(const DimensionParams& params, const Jet6& jet);

/// Same with cn replaced by A in the nonlinear term; conserved along
/// solutions of v^(6) = K4 v^(4) - K2 v'' + K0 v - A v^p. A = 0 allows v <= 0.
double hamiltonian_rescaled(const DimensionParams& params, double A, const CylState& state);
double hamiltonian_rescaled(const DimensionParams& params, double A, const Jet6& jet);

/// Time derivative of hamiltonian_rescaled along an arbitrary smooth curve
/// with 7-jet (v..v6): equals v' times the ODE defect.
double hamiltonian_rate(const DimensionParams& params, double A, const Jet6& jet, double v6);

struct PohozaevValue {
  double h_rad = 0;  ///< mean Hamiltonian density
  double p_cyl = 0;  ///< |S^{n-1}| h_rad
  /// max |h - h_mean| / max(|h_mean|, |H_cyl|), H_cyl = H_rad at the
  /// constant solution (a scale that stays meaningful when h_mean -> 0).
  double drift = 0;
  std::size_t samples = 0;
};

/// Hamiltonian at every node of the trajectory (and `extra_per_step` dense
/// samples inside each step), summarized as a Pohozaev value.
PohozaevValue pohozaev_cyl(const DimensionParams& params, const Trajectory& trajectory, int extra_per_step = 0);

/// Hamiltonian value of the constant solution, -(3/n) K0 eps*^2.
double hamiltonian_cylinder(const DimensionParams& params);

/// p_cyl of the periodic orbit with necksize eps0 (solves for the orbit).
double pohozaev_of_necksize(const DimensionParams& params, double eps0, const ShootingOptions& options = {});

/// Monotone table of (eps0, p_cyl) from a continuation sweep, with the orbits
/// kept for warm starts.
struct PohozaevTable {
  std::vector<double> eps0;
  std::vector<double> p_cyl;
  std::vector<DelaunayOrbit> orbits;
};
PohozaevTable pohozaev_table(const DimensionParams& params, const SweepResult& sweep);

/// Inverts eps0 -> p_cyl on the table range by a bracketed secant (Illinois)
/// iteration that re-solves the orbit at each probe, to
/// |p(eps0) - p_target| <= rel_tol |p_target|.
/// Throws DomainError when p_target lies outside the attained range.
double necksize_from_pohozaev(const DimensionParams& params, double p_target, const PohozaevTable& table,
                              double rel_tol = 1e-6, const ShootingOptions& options = {});

struct AsymptoteFit {
  double eps0 = 0;
  double phase = 0;  ///< T in (0, period]; NaN when degenerate
  double residual = 0;  ///< relative L-infinity misfit over the last period
  double period = 0;
  bool degenerate = false;  ///< constant input: no phase exists
  std::size_t minima = 0;
  std::optional<DelaunayOrbit> orbit;
};

struct FitOptions {
  /// Only samples with r in [r_min, r_max] are used (defaults: whole profile).
  std::optional<double> r_min, r_max;
  ShootingOptions shooting{};
};

/// Fits u(r) ~ r^-gamma v_eps(ln r + T) near r = 0: eps0 from the limit of
/// the local minima of v in cylinder coordinates (Aitken extrapolation when
/// three or more are available), T by aligning the profile against the
/// solved orbit. `table`, if given, seeds the orbit solve.
/// Throws NumericalError("insufficient-range ...") with fewer than 2 minima.
AsymptoteFit fit_asymptote(const RadialProfile& profile, const DimensionParams& params,
                           const PohozaevTable* table = nullptr, const FitOptions& options = {});

}  // namespace qcurv
