#include "qcurv/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "qcurv/errors.hpp"
#include "qcurv/hermite.hpp"

namespace qcurv {
namespace {

double nonlinear_energy(const DimensionParams& params, double A, double v) {
  if (A == 0.0) return 0.0;
  if (!(v > 0.0)) throw DomainError("Hamiltonian evaluated at v <= 0");
  // (n-6)/(2n) A v^(2n/(n-6)), written around eps* like the ODE right-hand side.
  const double kappa = A / params.cn * params.K0;
  return (params.n - 6.0) / (2.0 * params.n) * kappa * v * v * std::pow(v / params.eps_star, params.p - 1.0);
}

double quadratic_energy(const DimensionParams& params, const Jet6& y) {
  const auto [v, v1, v2, v3, v4, v5] = y;
  return 0.5 * v3 * v3 + 0.5 * params.K4 * v2 * v2 + 0.5 * params.K2 * v1 * v1 - 0.5 * params.K0 * v * v +
         v5 * v1 - v4 * v2 - params.K4 * v3 * v1;
}

struct Minimum {
  double t;
  double value;
};

// Local minima of w along increasing t. With jets (w, w', w'') a quintic
// Hermite interpolant per interval locates them; otherwise a parabola
// through three samples.
std::vector<Minimum> local_minima(const std::vector<double>& t, const std::vector<double>& w,
                                  const std::vector<Jet7>* jets) {
  std::vector<Minimum> out;
  const std::size_t n = t.size();
  if (jets) {
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double da = (*jets)[i][1], db = (*jets)[i + 1][1];
      if (!(da < 0.0 && db >= 0.0)) continue;
      const double h = t[i + 1] - t[i];
      std::array<double, 3> left{(*jets)[i][0], da, (*jets)[i][2]};
      std::array<double, 3> right{(*jets)[i + 1][0], db, (*jets)[i + 1][2]};
      std::array<double, 6> coef{};
      hermite_fit(left, right, h, coef);
      auto slope = [&](double s) { return polynomial_derivative(coef, s, 1); };
      double s = 1.0;
      if (db > 0.0) {
        std::uintmax_t iters = 100;
        auto tol = [](double a, double b) { return std::abs(b - a) <= 1e-15; };
        const auto [lo, hi] = boost::math::tools::toms748_solve(slope, 0.0, 1.0, slope(0.0), slope(1.0), tol, iters);
        s = 0.5 * (lo + hi);
      }
      out.push_back({t[i] + s * h, polynomial_derivative(coef, s, 0)});
    }
    return out;
  }
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (!(w[i] < w[i - 1] && w[i] <= w[i + 1])) continue;
    const double h1 = t[i] - t[i - 1], h2 = t[i + 1] - t[i];
    const double d1 = (w[i] - w[i - 1]) / h1, d2 = (w[i + 1] - w[i]) / h2;
    const double curv = 2 * (d2 - d1) / (h1 + h2);
    const double slope = d1 + 0.5 * curv * h1;  // derivative at t[i]
    const double shift = curv > 0.0 ? -slope / curv : 0.0;
    out.push_back({t[i] + shift, w[i] + 0.5 * slope * shift});
  }
  return out;
}

}  // namespace

double hamiltonian_rescaled(const DimensionParams& params, double A, const Jet6& jet) {
  return quadratic_energy(params, jet) + nonlinear_energy(params, A, jet[0]);
}

double hamiltonian_rescaled(const DimensionParams& params, double A, const CylState& state) {
  return hamiltonian_rescaled(params, A, state.jet);
}

double hamiltonian_rad(const DimensionParams& params, const Jet6& jet) {
  return hamiltonian_rescaled(params, params.cn, jet);
}

double hamiltonian_rad(const DimensionParams& params, const CylState& state) {
  return hamiltonian_rad(params, state.jet);
}

double hamiltonian_rate(const DimensionParams& params, double A, const Jet6& jet, double v6) {
  return jet[1] * (v6 - CylinderOde(params, A).sixth(jet));
}

double hamiltonian_cylinder(const DimensionParams& params) {
  return -3.0 / params.n * params.K0 * params.eps_star * params.eps_star;
}

PohozaevValue pohozaev_cyl(const DimensionParams& params, const Trajectory& trajectory, int extra_per_step) {
  if (trajectory.empty()) throw DomainError("empty trajectory");
  std::vector<double> h;
  const auto nodes = trajectory.nodes();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    h.push_back(hamiltonian_rad(params, nodes[i]));
    if (i + 1 < nodes.size()) {
      for (int j = 1; j <= extra_per_step; ++j) {
        const double t = nodes[i].t + (nodes[i + 1].t - nodes[i].t) * j / (extra_per_step + 1);
        h.push_back(hamiltonian_rad(params, trajectory.jet_at(t)));
      }
    }
  }
  PohozaevValue out;
  out.samples = h.size();
  out.h_rad = std::accumulate(h.begin(), h.end(), 0.0) / static_cast<double>(h.size());
  out.p_cyl = params.omega * out.h_rad;
  const double scale = std::max(std::abs(out.h_rad), std::abs(hamiltonian_cylinder(params)));
  double dev = 0.0;
  for (double x : h) dev = std::max(dev, std::abs(x - out.h_rad));
  out.drift = dev / scale;
  return out;
}

double pohozaev_of_necksize(const DimensionParams& params, double eps0, const ShootingOptions& options) {
  const DelaunayOrbit orbit = find_orbit(params, eps0, std::nullopt, options);
  return pohozaev_cyl(params, orbit.trajectory).p_cyl;
}

PohozaevTable pohozaev_table(const DimensionParams& params, const SweepResult& sweep) {
  PohozaevTable table;
  for (const DelaunayOrbit& orbit : sweep.orbits) {
    table.eps0.push_back(orbit.eps0);
    table.p_cyl.push_back(pohozaev_cyl(params, orbit.trajectory).p_cyl);
    table.orbits.push_back(orbit);
  }
  return table;
}

double necksize_from_pohozaev(const DimensionParams& params, double p_target, const PohozaevTable& table,
                              double rel_tol, const ShootingOptions& options) {
  if (table.eps0.empty()) throw DomainError("Pohozaev table is empty");
  if (p_target > 0.0) throw DomainError("Pohozaev target must be negative: the Delaunay family has p_cyl < 0");
  const auto [lo_it, hi_it] = std::minmax_element(table.p_cyl.begin(), table.p_cyl.end());
  const double p_lo = *lo_it, p_hi = *hi_it;
  const double slack = 1e-12 * std::max(std::abs(p_lo), std::abs(p_hi));
  if (p_target < p_lo - slack || p_target > p_hi + slack) {
    std::ostringstream os;
    os.precision(17);
    os << "Pohozaev target " << p_target << " outside the attained range [" << p_lo << ", " << p_hi << "]";
    throw DomainError(os.str());
  }
  const double tol = rel_tol * std::abs(p_target);
  for (std::size_t i = 0; i < table.eps0.size(); ++i) {
    if (std::abs(table.p_cyl[i] - p_target) <= tol) return table.eps0[i];
  }

  // Bracket between adjacent table entries.
  std::vector<std::size_t> order(table.eps0.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return table.eps0[a] < table.eps0[b]; });
  std::size_t ia = order.front(), ib = order.front();
  bool found = false;
  for (std::size_t k = 0; k + 1 < order.size(); ++k) {
    const double fa = table.p_cyl[order[k]] - p_target, fb = table.p_cyl[order[k + 1]] - p_target;
    if ((fa <= 0.0 && fb >= 0.0) || (fa >= 0.0 && fb <= 0.0)) {
      ia = order[k];
      ib = order[k + 1];
      found = true;
      break;
    }
  }
  if (!found) throw DomainError("Pohozaev target is not bracketed by the table");

  double a = table.eps0[ia], b = table.eps0[ib];
  double fa = table.p_cyl[ia] - p_target, fb = table.p_cyl[ib] - p_target;
  const DelaunayOrbit* seed = &table.orbits[ia];
  DelaunayOrbit probe;
  int side = 0;
  for (int it = 0; it < 100; ++it) {
    double c = (a * fb - b * fa) / (fb - fa);
    if (!(c > std::min(a, b) && c < std::max(a, b))) c = 0.5 * (a + b);
    probe = seed->constant ? find_orbit(params, c, std::nullopt, options) : find_orbit_from(params, c, *seed, options);
    seed = &probe;
    const double fc = pohozaev_cyl(params, probe.trajectory).p_cyl - p_target;
    if (std::abs(fc) <= tol || std::abs(b - a) <= 1e-15 * std::abs(c)) return c;
    if ((fc < 0.0) == (fa < 0.0)) {
      a = c;
      fa = fc;
      if (side == -1) fb *= 0.5;
      side = -1;
    } else {
      b = c;
      fb = fc;
      if (side == 1) fa *= 0.5;
      side = 1;
    }
  }
  throw ConvergenceError("necksize_from_pohozaev: no convergence", std::abs(fa), 100);
}

AsymptoteFit fit_asymptote(const RadialProfile& profile, const DimensionParams& params, const PohozaevTable* table,
                           const FitOptions& options) {
  profile.validate();
  const double r_min = options.r_min.value_or(profile.r.front());
  const double r_max = options.r_max.value_or(profile.r.back());

  // Cylinder samples ordered by increasing t (toward the puncture).
  const CylinderProfile cyl = emden_fowler_forward(profile, params);
  std::vector<double> t, w;
  std::vector<Jet7> jets;
  for (std::size_t k = cyl.size(); k-- > 0;) {
    if (profile.r[k] < r_min || profile.r[k] > r_max) continue;
    t.push_back(cyl.t[k]);
    w.push_back(cyl.v[k]);
    if (cyl.order >= 2) jets.push_back(cyl.jets[k]);
  }
  if (t.size() < 3) throw NumericalError("insufficient-range: fewer than 3 samples in the fit window");

  AsymptoteFit fit;
  const auto [wmin, wmax] = std::minmax_element(w.begin(), w.end());
  const double mean = std::accumulate(w.begin(), w.end(), 0.0) / static_cast<double>(w.size());
  if (*wmax - *wmin <= 1e-12 * mean) {
    fit.degenerate = true;
    fit.eps0 = mean;
    fit.phase = std::numeric_limits<double>::quiet_NaN();
    fit.residual = std::abs(mean - params.eps_star) / params.eps_star;
    fit.period = linearized_orbit_guess(params, params.eps_star).period;
    return fit;
  }

  const std::vector<Minimum> minima = local_minima(t, w, jets.empty() ? nullptr : &jets);
  fit.minima = minima.size();
  if (minima.size() < 2) {
    throw NumericalError("insufficient-range: " + std::to_string(minima.size()) +
                         " local minima of r^gamma u in the fit window, need at least 2");
  }

  // Limit of the minima toward the puncture.
  const std::size_t m = minima.size();
  double eps0 = minima[m - 1].value;
  if (m >= 3) {
    const double x0 = minima[m - 3].value, x1 = minima[m - 2].value, x2 = minima[m - 1].value;
    const double denom = (x2 - x1) - (x1 - x0);
    if (std::abs(denom) > 1e-14 * std::abs(x2)) {
      const double accel = x2 - (x2 - x1) * (x2 - x1) / denom;
      if (std::isfinite(accel) && accel > 0.0) eps0 = accel;
    }
  }
  eps0 = std::min(eps0, params.eps_star);
  fit.eps0 = eps0;

  // Orbit for the estimated necksize, seeded from the nearest table entry.
  DelaunayOrbit orbit;
  const DelaunayOrbit* seed = nullptr;
  if (table && !table->orbits.empty()) {
    double best = std::numeric_limits<double>::infinity();
    for (const DelaunayOrbit& o : table->orbits) {
      if (!o.constant && std::abs(o.eps0 - eps0) < best) {
        best = std::abs(o.eps0 - eps0);
        seed = &o;
      }
    }
  }
  orbit = seed ? find_orbit_from(params, eps0, *seed, options.shooting)
               : find_orbit(params, eps0, std::nullopt, options.shooting);
  const double period = orbit.period;
  fit.period = period;

  // w(t) = v(t - T): minima of w sit at T mod period.
  auto reduce = [period](double x) {
    double s = std::fmod(x, period);
    if (s <= 0.0) s += period;
    return s;
  };
  const double t_end = t.back();
  std::vector<std::size_t> window;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] >= t_end - period) window.push_back(i);
  }
  auto misfit = [&](double T) {
    double acc = 0.0;
    for (std::size_t i : window) {
      const double d = w[i] - orbit.jet_at(t[i] - T)[0];
      acc += d * d;
    }
    return acc;
  };
  const double T0 = minima.back().t;
  const double half_width = 0.02 * period;
  const double T_best = boost::math::tools::brent_find_minima(misfit, T0 - half_width, T0 + half_width, 40).first;
  const double T = misfit(T_best) < misfit(T0) ? T_best : T0;
  fit.phase = reduce(T);

  double worst = 0.0, scale = 0.0;
  for (std::size_t i : window) {
    worst = std::max(worst, std::abs(w[i] - orbit.jet_at(t[i] - T)[0]));
    scale = std::max(scale, std::abs(w[i]));
  }
  fit.residual = worst / scale;
  fit.orbit = std::move(orbit);
  return fit;
}

}  // namespace qcurv
