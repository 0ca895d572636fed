#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qcurv/dimension.hpp"
#include "qcurv/integrator.hpp"

namespace qcurv {

/// A periodic (Delaunay) solution of the cylinder ODE, even about t = 0
/// where it attains its minimum eps0, and even about the half time t*.
struct DelaunayOrbit {
  int n = 0;
  double eps0 = 0;
  double eps2 = 0;  ///< v''(0)
  double eps4 = 0;  ///< v''''(0)
  double period = 0;
  double half_time = 0;  ///< t*, period = 2 t*
  double energy = 0;     ///< H_rad on the orbit
  double residual = 0;   ///< norm of the final shooting residual
  int iterations = 0;
  bool converged = false;
  bool constant = false;  ///< eps0 = eps*: the cylinder solution
  /// Jets at the shooting nodes t_k = k t*/M, k = 0..M (the last at t*).
  std::vector<Jet6> nodes;
  /// Largest jump between consecutive integrated segments over one period.
  double stitch_defect = 0;
  /// max |jet(period) - jet(0)|, with jet(period) obtained by integration.
  double periodicity_defect = 0;
  /// Dense trajectory over [0, period].
  Trajectory trajectory;

  std::size_t segments() const { return nodes.empty() ? 0 : nodes.size() - 1; }
  /// Jet at any t, reduced modulo the period onto the stored trajectory.
  Jet6 jet_at(double t) const;
};

struct ShootingOptions {
  double tol = 1e-9;  ///< residual norm required for convergence
  int max_iterations = 50;
  Tolerances integration{1e-13, 1e-12};
  double t_min = 1e-3;    ///< exclusion window after t = 0 for the v' event
  double fd_step = 1e-6;  ///< relative finite-difference step
  /// Segment length target for multiple shooting; 0 picks 3/(n+2).
  double segment_length = 0;
  /// Continuation step (relative to eps*) used when no initial guess is
  /// given and eps0 is far from eps*.
  double continuation_step = 0.05;
};

struct ShootResidual {
  double r3 = 0;  ///< v'''(t*)
  double r5 = 0;  ///< v'''''(t*)
  double half_time = 0;
  /// v' stayed below the 1e-14 detection threshold: the solution is the
  /// constant one and has no next critical point.
  bool degenerate = false;

  double norm() const;
};

/// Single shooting: integrate from (eps0, 0, eps2, 0, eps4, 0) to the first
/// zero t* > t_min of v' and return the odd derivatives there.
/// Throws NumericalError("no-critical-point ...") if v' does not vanish before
/// the integration stops.
ShootResidual shoot_residual(const DimensionParams& params, double eps0, double eps2, double eps4,
                             const ShootingOptions& options = {});

struct LinearGuess {
  double eps2 = 0;
  double eps4 = 0;
  double period = 0;
  double sigma = 0;  ///< omega^2, positive root of the characteristic cubic
  double omega = 0;
};

/// Positive root of s^3 + K4 s^2 + K2 s - (p-1) K0 (the squared frequency of
/// small oscillations about eps*).
double linear_frequency_squared(const DimensionParams& params);

/// Small-amplitude orbit v = eps* - a cos(omega t), a = eps* - eps0.
LinearGuess linearized_orbit_guess(const DimensionParams& params, double eps0);

struct OrbitGuess {
  double eps2 = 0;
  double eps4 = 0;
};

/// Periodic orbit with minimum eps0 in (0, eps*]. Solves the symmetric
/// boundary problem by multiple shooting on [0, t*] (unknowns eps2, eps4, t*
/// and interior node jets) with a damped Newton iteration.
/// Throws DomainError for eps0 outside (0, eps*] and ConvergenceError when
/// Newton fails.
DelaunayOrbit find_orbit(const DimensionParams& params, double eps0,
                         std::optional<OrbitGuess> guess = std::nullopt,
                         const ShootingOptions& options = {});

/// find_orbit warm-started from a previously computed orbit (typically a
/// nearby necksize); the whole node profile is reused as the initial guess.
DelaunayOrbit find_orbit_from(const DimensionParams& params, double eps0, const DelaunayOrbit& seed,
                              const ShootingOptions& options = {});

struct SweepResult {
  std::vector<DelaunayOrbit> orbits;
  bool complete = false;
  std::optional<double> failed_eps0;
  std::string diagnostics;
  /// Period increased at every step of decreasing eps0 (reported, not enforced).
  bool period_increasing = true;
};

/// Orbits along `grid` (decreasing from near eps*), each solve warm-started
/// from the previous orbit. Stops at the first failure.
SweepResult continuation_sweep(const DimensionParams& params, std::span<const double> grid,
                               const ShootingOptions& options = {});

/// Integrated periodic extension of an orbit over `periods` periods, built
/// segment by segment from the node jets (and their time reversals on the
/// second half of each period). Each segment is an independent integration.
struct OrbitExtension {
  Trajectory trajectory;
  double stitch_defect = 0;
};
OrbitExtension orbit_trajectory(const DimensionParams& params, const DelaunayOrbit& orbit, int periods,
                                const Tolerances& tol = {1e-13, 1e-12});

}  // namespace qcurv
