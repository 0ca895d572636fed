#include "qcurv/shooting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <Eigen/Dense>
#include <boost/math/tools/toms748_solve.hpp>

#include "qcurv/errors.hpp"
#include "qcurv/invariants.hpp"

namespace qcurv {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kInf = std::numeric_limits<double>::infinity();

double max_abs_diff(const Jet6& a, const Jet6& b) {
  double m = 0.0;
  for (int i = 0; i < 6; ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

void check_necksize(const DimensionParams& params, double eps0) {
  if (!(eps0 > 0.0) || eps0 > params.eps_star * (1 + 1e-12)) {
    std::ostringstream os;
    os.precision(17);
    os << "necksize eps0 = " << eps0 << " outside (0, eps*] with eps* = " << params.eps_star;
    throw DomainError(os.str());
  }
}

bool is_cylinder(const DimensionParams& params, double eps0) {
  return std::abs(eps0 - params.eps_star) <= 1e-12 * params.eps_star;
}

// Symmetric boundary problem on [0, t*] by multiple shooting with M segments.
// Unknowns z = (eps2, eps4, t*, x_1, ..., x_{M-1}), x_k the jet at k t*/M.
// Residual: x_{k+1} - phi_d(x_k) for k < M-1 and the odd part of phi_d(x_{M-1}).
class SymmetricShooting {
 public:
  SymmetricShooting(const DimensionParams& params, double eps0, int segments, const ShootingOptions& options)
      : params_(params), ode_(params), eps0_(eps0), M_(segments), options_(options) {}

  int segments() const { return M_; }
  Eigen::Index size() const { return 3 + 6 * (M_ - 1); }

  Jet6 node(const VectorXd& z, int k) const {
    if (k == 0) return {eps0_, 0.0, z[0], 0.0, z[1], 0.0};
    Jet6 x;
    for (int i = 0; i < 6; ++i) x[i] = z[3 + 6 * (k - 1) + i];
    return x;
  }

  double step(const VectorXd& z) const { return z[2] / M_; }

  // Flow over one segment; nullopt if the integration leaves the domain.
  std::optional<Jet6> flow(const Jet6& x, double d) const {
    if (!(d > 0.0) || !(x[0] > 0.0)) return std::nullopt;
    IntegrateOptions opts;
    opts.tol = options_.integration;
    opts.max_steps = 20000;
    Trajectory tr;
    try {
      tr = integrate(params_, {0.0, x}, d, opts);
    } catch (const DomainError&) {
      return std::nullopt;
    }
    if (tr.status() != IntegrationStatus::Completed) return std::nullopt;
    return tr.nodes().back().jet;
  }

  // Residual plus the segment end states (needed for the analytic t* column).
  std::optional<VectorXd> residual(const VectorXd& z, std::vector<Jet6>* ends = nullptr) const {
    const double d = step(z);
    VectorXd F(size());
    if (ends) ends->assign(M_, Jet6{});
    for (int k = 0; k < M_; ++k) {
      const auto end = flow(node(z, k), d);
      if (!end) return std::nullopt;
      if (ends) (*ends)[k] = *end;
      write_rows(F, k, *end, k + 1 < M_ ? node(z, k + 1) : Jet6{});
    }
    return F;
  }

  MatrixXd jacobian(const VectorXd& z, const std::vector<Jet6>& ends) const {
    const Eigen::Index N = size();
    MatrixXd J = MatrixXd::Zero(N, N);
    const double d = step(z);
    auto rows_of = [&](int k, const Jet6& e, int col, double h) {
      const Jet6& base = ends[k];
      if (k + 1 < M_) {
        for (int i = 0; i < 6; ++i) J(6 * k + i, col) = (e[i] - base[i]) / h;
      } else {
        for (int i = 0; i < 3; ++i) J(6 * k + i, col) = (e[2 * i + 1] - base[2 * i + 1]) / h;
      }
    };
    auto perturbed = [&](const Jet6& x, int comp, int k, int col) {
      Jet6 xp = x;
      const double h = options_.fd_step * std::max(1.0, std::abs(x[comp]));
      xp[comp] += h;
      const auto e = flow(xp, d);
      if (!e) throw NumericalError("segment flow failed while forming the Jacobian");
      rows_of(k, *e, col, h);
    };

    // eps2, eps4 enter only the first segment.
    const Jet6 x0 = node(z, 0);
    perturbed(x0, 2, 0, 0);
    perturbed(x0, 4, 0, 1);
    // t*: every segment end moves with velocity f(end)/M.
    for (int k = 0; k < M_; ++k) {
      const Jet6 f = ode_(ends[k]);
      if (k + 1 < M_) {
        for (int i = 0; i < 6; ++i) J(6 * k + i, 2) = f[i] / M_;
      } else {
        for (int i = 0; i < 3; ++i) J(6 * k + i, 2) = f[2 * i + 1] / M_;
      }
    }
    // Interior nodes: own segment through the flow, previous segment through -I.
    for (int k = 1; k < M_; ++k) {
      const Jet6 x = node(z, k);
      for (int i = 0; i < 6; ++i) {
        const int col = 3 + 6 * (k - 1) + i;
        perturbed(x, i, k, col);
        J(6 * (k - 1) + i, col) -= 1.0;
      }
    }
    return J;
  }

 private:
  void write_rows(VectorXd& F, int k, const Jet6& end, const Jet6& next) const {
    if (k + 1 < M_) {
      for (int i = 0; i < 6; ++i) F[6 * k + i] = end[i] - next[i];
    } else {
      for (int i = 0; i < 3; ++i) F[6 * k + i] = end[2 * i + 1];
    }
  }

  const DimensionParams& params_;
  CylinderOde ode_;
  double eps0_;
  int M_;
  const ShootingOptions& options_;
};

int segment_count(const DimensionParams& params, double half_time, const ShootingOptions& options) {
  const double L = options.segment_length > 0 ? options.segment_length : 3.0 / (params.n + 2);
  return std::max(1, static_cast<int>(std::ceil(half_time / L)));
}

struct NewtonOutcome {
  VectorXd z;
  double residual = kInf;
  int iterations = 0;
};

NewtonOutcome newton_solve(const SymmetricShooting& problem, VectorXd z, const ShootingOptions& options) {
  std::vector<Jet6> ends;
  auto F = problem.residual(z, &ends);
  if (!F) throw ConvergenceError("shooting: initial guess leaves the domain of the ODE", kInf, 0);
  NewtonOutcome out{z, F->norm(), 0};

  for (int it = 1; it <= options.max_iterations; ++it) {
    out.iterations = it;
    const MatrixXd J = problem.jacobian(z, ends);
    const Eigen::PartialPivLU<MatrixXd> lu(J);
    const VectorXd dz = lu.solve(-*F);
    if (!dz.allFinite()) throw ConvergenceError("shooting: singular Jacobian", out.residual, it);

    const double r0 = F->norm();
    double lambda = 1.0;
    bool improved = false;
    while (lambda >= 1.0 / 1024) {
      VectorXd trial = z + lambda * dz;
      if (trial[2] > 0.0) {
        std::vector<Jet6> trial_ends;
        auto Ft = problem.residual(trial, &trial_ends);
        if (Ft && Ft->norm() < r0) {
          z = std::move(trial);
          F = std::move(Ft);
          ends = std::move(trial_ends);
          improved = true;
          break;
        }
      }
      lambda *= 0.5;
    }
    const double r = F->norm();
    if (r < out.residual) {
      out.z = z;
      out.residual = r;
    }
    if (!improved) break;  // stalled at the integration noise floor
    if (r <= 1e-3 * options.tol) break;
    if (r <= options.tol && r > 0.5 * r0) break;
  }
  return out;
}

DelaunayOrbit constant_orbit(const DimensionParams& params) {
  DelaunayOrbit orbit;
  orbit.n = params.n;
  orbit.eps0 = params.eps_star;
  orbit.period = linearized_orbit_guess(params, params.eps_star).period;
  orbit.half_time = orbit.period / 2;
  orbit.converged = true;
  orbit.constant = true;
  const Jet6 c{params.eps_star, 0, 0, 0, 0, 0};
  orbit.nodes = {c, c};
  orbit.energy = hamiltonian_rad(params, c);
  orbit.trajectory = integrate(params, {0.0, c}, orbit.period);
  return orbit;
}

// Builds the converged orbit record from the Newton solution.
DelaunayOrbit assemble(const DimensionParams& params, double eps0, const SymmetricShooting& problem,
                       const NewtonOutcome& sol, const ShootingOptions& options) {
  DelaunayOrbit orbit;
  orbit.n = params.n;
  orbit.eps0 = eps0;
  orbit.eps2 = sol.z[0];
  orbit.eps4 = sol.z[1];
  orbit.half_time = sol.z[2];
  orbit.period = 2 * orbit.half_time;
  orbit.residual = sol.residual;
  orbit.iterations = sol.iterations;
  orbit.converged = sol.residual <= options.tol;

  const int M = problem.segments();
  for (int k = 0; k < M; ++k) orbit.nodes.push_back(problem.node(sol.z, k));
  {
    const auto end = problem.flow(orbit.nodes.back(), problem.step(sol.z));
    if (!end) throw NumericalError("converged orbit could not be re-integrated");
    orbit.nodes.push_back(*end);
  }
  orbit.energy = hamiltonian_rad(params, orbit.nodes.front());

  auto ext = orbit_trajectory(params, orbit, 1, options.integration);
  orbit.trajectory = std::move(ext.trajectory);
  orbit.stitch_defect = ext.stitch_defect;
  orbit.periodicity_defect = max_abs_diff(orbit.trajectory.nodes().back().jet, orbit.nodes.front());
  return orbit;
}

VectorXd initial_vector(int M, double half_time, double eps2, double eps4,
                        const std::function<Jet6(double)>& profile) {
  VectorXd z(3 + 6 * (M - 1));
  z[0] = eps2;
  z[1] = eps4;
  z[2] = half_time;
  for (int k = 1; k < M; ++k) {
    const Jet6 x = profile(k * half_time / M);
    for (int i = 0; i < 6; ++i) z[3 + 6 * (k - 1) + i] = x[i];
  }
  return z;
}

DelaunayOrbit solve(const DimensionParams& params, double eps0, double half_time, double eps2, double eps4,
                    const std::function<Jet6(double)>& profile, const ShootingOptions& options) {
  const int M = segment_count(params, half_time, options);
  SymmetricShooting problem(params, eps0, M, options);
  const VectorXd z0 = initial_vector(M, half_time, eps2, eps4, profile);
  const NewtonOutcome sol = newton_solve(problem, z0, options);
  if (!(sol.residual <= options.tol)) {
    std::ostringstream os;
    os.precision(6);
    os << "shooting did not converge for eps0 = " << eps0 << " (best residual " << sol.residual << " after "
       << sol.iterations << " iterations)";
    throw ConvergenceError(os.str(), sol.residual, sol.iterations);
  }
  return assemble(params, eps0, problem, sol, options);
}

Jet6 linear_profile(const DimensionParams& params, double eps0, double omega, double t) {
  const double a = params.eps_star - eps0;
  Jet6 x{};
  double wk = 1.0;
  for (int k = 0; k < 6; ++k) {
    x[k] = -a * wk * std::cos(omega * t + k * std::numbers::pi / 2);
    wk *= omega;
  }
  x[0] += params.eps_star;
  return x;
}

}  // namespace

double ShootResidual::norm() const { return std::hypot(r3, r5); }

Jet6 DelaunayOrbit::jet_at(double t) const {
  if (trajectory.empty()) throw DomainError("orbit has no trajectory");
  double s = std::fmod(t, period);
  if (s < 0) s += period;
  return trajectory.jet_at(std::min(s, trajectory.t_end()));
}

double linear_frequency_squared(const DimensionParams& params) {
  const double c0 = (params.p - 1.0) * params.K0;
  auto cubic = [&](double s) { return ((s + params.K4) * s + params.K2) * s - c0; };
  // cubic(0) < 0 and cubic(c0 / K2) >= 0 since the other terms are positive.
  double lo = 0.0, hi = c0 / params.K2;
  std::uintmax_t iters = 200;
  auto tol = [](double a, double b) { return std::abs(b - a) <= 4 * std::numeric_limits<double>::epsilon() * std::abs(b); };
  const auto [a, b] = boost::math::tools::toms748_solve(cubic, lo, hi, tol, iters);
  return 0.5 * (a + b);
}

LinearGuess linearized_orbit_guess(const DimensionParams& params, double eps0) {
  check_necksize(params, eps0);
  LinearGuess g;
  g.sigma = linear_frequency_squared(params);
  g.omega = std::sqrt(g.sigma);
  g.period = 2 * std::numbers::pi / g.omega;
  const double a = is_cylinder(params, eps0) ? 0.0 : params.eps_star - eps0;
  // v = eps* - a cos(omega t): v'' = a omega^2, v'''' = -a omega^4 at t = 0.
  g.eps2 = a * g.sigma;
  g.eps4 = -a * g.sigma * g.sigma;
  return g;
}

ShootResidual shoot_residual(const DimensionParams& params, double eps0, double eps2, double eps4,
                             const ShootingOptions& options) {
  check_necksize(params, eps0);
  for (double x : {eps2, eps4}) {
    if (!std::isfinite(x)) throw DomainError("shooting parameters must be finite");
  }
  const double horizon = 10 * linearized_orbit_guess(params, params.eps_star).period;
  IntegrateOptions opts;
  opts.tol = options.integration;
  opts.stop_on = [](const CylState& s) { return s.jet[1]; };
  opts.stop_after = options.t_min;
  const Trajectory tr = integrate(params, {0.0, {eps0, 0.0, eps2, 0.0, eps4, 0.0}}, horizon, opts);

  ShootResidual out;
  if (tr.status() == IntegrationStatus::TerminalEvent) {
    const double ts = *tr.event_time();
    const Jet6 jet = tr.jet_at(ts);
    out.r3 = jet[3];
    out.r5 = jet[5];
    out.half_time = ts;
    return out;
  }
  double amplitude = 0.0;
  for (const CylState& s : tr.nodes()) amplitude = std::max(amplitude, std::abs(s.jet[1]));
  if (amplitude < 1e-14) {
    out.degenerate = true;
    out.half_time = horizon / 20;
    return out;
  }
  throw NumericalError("no-critical-point: v' does not vanish after t_min (integration ended with status " +
                       std::string(to_string(tr.status())) + " at t = " + std::to_string(tr.t_end()) + ")");
}

DelaunayOrbit find_orbit(const DimensionParams& params, double eps0, std::optional<OrbitGuess> guess,
                         const ShootingOptions& options) {
  check_necksize(params, eps0);
  if (is_cylinder(params, eps0)) return constant_orbit(params);

  const LinearGuess lin = linearized_orbit_guess(params, eps0);
  const double rel = eps0 / params.eps_star;
  const double start_rel = 1.0 - options.continuation_step;

  if (!guess && rel < start_rel - 1e-12) {
    // Natural continuation from the small-amplitude regime.
    DelaunayOrbit seed = find_orbit(params, start_rel * params.eps_star, std::nullopt, options);
    for (double r = start_rel - options.continuation_step; r > rel + 1e-12; r -= options.continuation_step) {
      seed = find_orbit_from(params, r * params.eps_star, seed, options);
    }
    return find_orbit_from(params, eps0, seed, options);
  }

  const double eps2 = guess ? guess->eps2 : lin.eps2;
  const double eps4 = guess ? guess->eps4 : lin.eps4;
  // Interior node jets always start from the linear mode.
  auto profile = [&](double t) { return linear_profile(params, eps0, lin.omega, t); };
  return solve(params, eps0, lin.period / 2, eps2, eps4, profile, options);
}

DelaunayOrbit find_orbit_from(const DimensionParams& params, double eps0, const DelaunayOrbit& seed,
                              const ShootingOptions& options) {
  check_necksize(params, eps0);
  if (is_cylinder(params, eps0)) return constant_orbit(params);
  if (seed.constant || seed.trajectory.empty()) return find_orbit(params, eps0, std::nullopt, options);
  const double ts = seed.half_time;
  auto profile = [&](double t) { return seed.trajectory.jet_at(std::clamp(t, 0.0, ts)); };
  return solve(params, eps0, ts, seed.eps2, seed.eps4, profile, options);
}

SweepResult continuation_sweep(const DimensionParams& params, std::span<const double> grid,
                               const ShootingOptions& options) {
  SweepResult result;
  if (grid.empty()) throw DomainError("continuation grid is empty");
  for (double e : grid) check_necksize(params, e);
  std::ostringstream diag;
  diag.precision(17);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double e = grid[i];
    try {
      DelaunayOrbit orbit = result.orbits.empty() ? find_orbit(params, e, std::nullopt, options)
                                                  : find_orbit_from(params, e, result.orbits.back(), options);
      if (!result.orbits.empty()) {
        const DelaunayOrbit& prev = result.orbits.back();
        if (e < prev.eps0 && !(orbit.period > prev.period)) {
          result.period_increasing = false;
          diag << "period not increasing between eps0 = " << prev.eps0 << " and " << e << "; ";
        }
      }
      result.orbits.push_back(std::move(orbit));
    } catch (const NumericalError& err) {
      result.failed_eps0 = e;
      diag << "failed at eps0 = " << e << ": " << err.what();
      result.diagnostics = diag.str();
      return result;
    }
  }
  result.complete = true;
  result.diagnostics = diag.str();
  return result;
}

OrbitExtension orbit_trajectory(const DimensionParams& params, const DelaunayOrbit& orbit, int periods,
                                const Tolerances& tol) {
  if (periods < 1) throw DomainError("number of periods must be positive");
  if (orbit.nodes.size() < 2) throw DomainError("orbit has no node jets");
  OrbitExtension ext;
  if (orbit.constant) {
    ext.trajectory = integrate(params, {0.0, orbit.nodes.front()}, periods * orbit.period);
    return ext;
  }
  const int M = static_cast<int>(orbit.segments());
  const double d = orbit.half_time / M;
  // Segment starts over one period: x_0..x_{M-1}, then R x_M, R x_{M-1}, ..., R x_1
  // (time reversal about t* maps the jet at t* - s to the jet at t* + s).
  std::vector<Jet6> starts;
  for (int k = 0; k < M; ++k) starts.push_back(orbit.nodes[k]);
  // At t* use the symmetric part of the end jet (its odd part is the residual).
  Jet6 top = orbit.nodes[M];
  for (int i = 1; i < 6; i += 2) top[i] = 0.0;
  starts.push_back(top);
  for (int k = M - 1; k >= 1; --k) starts.push_back(reverse(orbit.nodes[k]));

  IntegrateOptions opts;
  opts.tol = tol;
  for (int p = 0; p < periods; ++p) {
    for (int k = 0; k < 2 * M; ++k) {
      // Times as (p 2M + k) d keep segment boundaries bitwise consistent.
      const double t0 = static_cast<double>(p * 2 * M + k) * d;
      const double t1 = static_cast<double>(p * 2 * M + k + 1) * d;
      Trajectory seg = integrate(params, {t0, starts[k]}, t1, opts);
      if (seg.status() != IntegrationStatus::Completed) {
        throw NumericalError("orbit segment integration failed: " + std::string(to_string(seg.status())));
      }
      ext.stitch_defect = std::max(ext.stitch_defect, ext.trajectory.append(seg));
    }
  }
  return ext;
}

}  // namespace qcurv
