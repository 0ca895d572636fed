#include "qcurv/transforms.hpp"

#include <cmath>

#include "qcurv/errors.hpp"
#include "qcurv/integrator.hpp"
#include "qcurv/shooting.hpp"
#include "qcurv/taylor.hpp"

namespace qcurv {
namespace {

constexpr int kMaxOrder = 6;

// Stirling numbers of the second kind S(k, j): D^k = sum_j S(k, j) r^j d^j/dr^j.
constexpr std::array<std::array<double, 7>, 7> kStirling2 = {{
    {1, 0, 0, 0, 0, 0, 0},
    {0, 1, 0, 0, 0, 0, 0},
    {0, 1, 1, 0, 0, 0, 0},
    {0, 1, 3, 1, 0, 0, 0},
    {0, 1, 7, 6, 1, 0, 0},
    {0, 1, 15, 25, 10, 1, 0},
    {0, 1, 31, 90, 65, 15, 1},
}};

// Signed Stirling numbers of the first kind s(k, j): r^k d^k/dr^k = sum_j s(k, j) D^j.
constexpr std::array<std::array<double, 7>, 7> kStirling1 = {{
    {1, 0, 0, 0, 0, 0, 0},
    {0, 1, 0, 0, 0, 0, 0},
    {0, -1, 1, 0, 0, 0, 0},
    {0, 2, -3, 1, 0, 0, 0},
    {0, -6, 11, -6, 1, 0, 0},
    {0, 24, -50, 35, -10, 1, 0},
    {0, -120, 274, -225, 85, -15, 1},
}};

constexpr std::array<std::array<double, 7>, 7> kBinomial = {{
    {1, 0, 0, 0, 0, 0, 0},
    {1, 1, 0, 0, 0, 0, 0},
    {1, 2, 1, 0, 0, 0, 0},
    {1, 3, 3, 1, 0, 0, 0},
    {1, 4, 6, 4, 1, 0, 0},
    {1, 5, 10, 10, 5, 1, 0},
    {1, 6, 15, 20, 15, 6, 1},
}};

void check_order(int order) {
  if (order < 0 || order > kMaxOrder) throw DomainError("jet order must be in [0, 6]");
}

}  // namespace

void RadialProfile::validate() const {
  if (r.empty()) throw DomainError("profile is empty");
  if (u.size() != r.size()) throw DomainError("profile radii and values differ in length");
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (!(r[i] > 0.0) || !std::isfinite(r[i])) throw DomainError("profile radii must be positive");
    if (i > 0 && !(r[i] > r[i - 1])) throw DomainError("profile radii must be strictly increasing");
    if (!(u[i] > 0.0) || !std::isfinite(u[i])) throw DomainError("profile values must be positive");
  }
  if (order >= 0) {
    check_order(order);
    if (jets.size() != r.size()) throw DomainError("profile jets must be present at every node");
  } else if (!jets.empty()) {
    throw DomainError("profile carries jets without a jet order");
  }
}

std::vector<double> log_grid(double r_min, double r_max, std::size_t count) {
  if (!(r_min > 0.0) || !(r_max > r_min) || count < 2) throw DomainError("log grid needs 0 < r_min < r_max, count >= 2");
  std::vector<double> grid(count);
  const double a = std::log(r_min), b = std::log(r_max);
  for (std::size_t i = 0; i < count; ++i) {
    grid[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1));
  }
  grid.front() = r_min;
  grid.back() = r_max;
  return grid;
}

Jet7 log_jet_from_radial(const Jet7& u, double r, double gamma, int order) {
  check_order(order);
  // D^j u = sum_i S(j, i) r^i u^(i).
  Jet7 Du{};
  for (int j = 0; j <= order; ++j) {
    double acc = 0.0, ri = 1.0;
    for (int i = 0; i <= j; ++i) {
      acc += kStirling2[j][i] * ri * u[i];
      ri *= r;
    }
    Du[j] = acc;
  }
  // w = r^gamma u = e^{gamma s} u, so w^(k) = r^gamma (D + gamma)^k u.
  const double rg = std::pow(r, gamma);
  Jet7 w{};
  for (int k = 0; k <= order; ++k) {
    double acc = 0.0;
    for (int j = 0; j <= k; ++j) acc += kBinomial[k][j] * std::pow(gamma, k - j) * Du[j];
    w[k] = rg * acc;
  }
  return w;
}

Jet7 radial_jet_from_log(const Jet7& w, double r, double gamma, int order) {
  check_order(order);
  // D^j u = r^-gamma (d/ds - gamma)^j w.
  const double rg = std::pow(r, -gamma);
  Jet7 Du{};
  for (int j = 0; j <= order; ++j) {
    double acc = 0.0;
    for (int i = 0; i <= j; ++i) acc += kBinomial[j][i] * std::pow(-gamma, j - i) * w[i];
    Du[j] = rg * acc;
  }
  Jet7 u{};
  double rk = 1.0;
  for (int k = 0; k <= order; ++k) {
    double acc = 0.0;
    for (int j = 0; j <= k; ++j) acc += kStirling1[k][j] * Du[j];
    u[k] = acc / rk;
    rk *= r;
  }
  return u;
}

CylinderProfile emden_fowler_forward(const RadialProfile& profile, const DimensionParams& params) {
  profile.validate();
  CylinderProfile out;
  out.n = params.n;
  out.order = profile.order;
  out.t.resize(profile.size());
  out.v.resize(profile.size());
  for (std::size_t i = 0; i < profile.size(); ++i) {
    const double r = profile.r[i];
    out.t[i] = -std::log(r);
    out.v[i] = std::pow(r, params.gamma) * profile.u[i];
    if (profile.order >= 0) {
      // t = -s flips odd derivatives.
      Jet7 w = log_jet_from_radial(profile.jets[i], r, params.gamma, profile.order);
      for (int k = 1; k <= profile.order; k += 2) w[k] = -w[k];
      out.jets.push_back(w);
    }
  }
  return out;
}

RadialProfile emden_fowler_inverse(const CylinderProfile& cylinder, const DimensionParams& params) {
  if (cylinder.v.size() != cylinder.t.size()) throw DomainError("cylinder profile times and values differ in length");
  if (cylinder.order >= 0 && cylinder.jets.size() != cylinder.t.size()) {
    throw DomainError("cylinder profile jets must be present at every node");
  }
  RadialProfile out;
  out.n = params.n;
  out.order = cylinder.order;
  for (std::size_t i = 0; i < cylinder.size(); ++i) {
    if (!std::isfinite(cylinder.t[i])) throw DomainError("cylinder times must be finite");
    const double r = std::exp(-cylinder.t[i]);
    out.r.push_back(r);
    out.u.push_back(std::pow(r, -params.gamma) * cylinder.v[i]);
    if (cylinder.order >= 0) {
      Jet7 w = cylinder.jets[i];
      for (int k = 1; k <= cylinder.order; k += 2) w[k] = -w[k];
      out.jets.push_back(radial_jet_from_log(w, r, params.gamma, cylinder.order));
    }
  }
  return out;
}

RadialProfile scaling_law(const RadialProfile& profile, double lambda, const DimensionParams& params) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw DomainError("scaling factor must be positive");
  profile.validate();
  RadialProfile out = profile;
  out.n = params.n;
  const double lg = std::pow(lambda, params.gamma);
  for (std::size_t i = 0; i < profile.size(); ++i) {
    out.r[i] = profile.r[i] / lambda;
    out.u[i] = lg * profile.u[i];
    if (profile.order >= 0) {
      double scale = lg;
      for (int k = 0; k <= profile.order; ++k) {
        out.jets[i][k] = scale * profile.jets[i][k];
        scale *= lambda;
      }
    }
  }
  return out;
}

double spherical_solution(double distance, double eps, const DimensionParams& params) {
  if (!(eps > 0.0)) throw DomainError("bubble parameter eps must be positive");
  return std::pow(2 * eps / (1 + eps * eps * distance * distance), params.gamma);
}

RadialProfile spherical_profile(const DimensionParams& params, std::span<const double> grid, double eps) {
  if (!(eps > 0.0)) throw DomainError("bubble parameter eps must be positive");
  RadialProfile out;
  out.n = params.n;
  out.order = kMaxOrder;
  for (double r : grid) {
    const TaylorSeries x = TaylorSeries::variable(r, kMaxOrder);
    const TaylorSeries base = (eps * eps) * (x * x) + 1.0;
    const std::vector<double> jet = (std::pow(2 * eps, params.gamma) * pow(base, -params.gamma)).to_jet();
    Jet7 j{};
    std::copy(jet.begin(), jet.end(), j.begin());
    out.r.push_back(r);
    out.u.push_back(j[0]);
    out.jets.push_back(j);
  }
  out.validate();
  return out;
}

RadialProfile cylinder_profile(const DimensionParams& params, std::span<const double> grid, double c) {
  if (!(c > 0.0)) throw DomainError("cylinder amplitude must be positive");
  RadialProfile out;
  out.n = params.n;
  out.order = kMaxOrder;
  for (double r : grid) {
    Jet7 j{};
    double falling = 1.0;  // (-gamma)(-gamma-1)...(-gamma-k+1)
    for (int k = 0; k <= kMaxOrder; ++k) {
      j[k] = c * falling * std::pow(r, -params.gamma - k);
      falling *= -params.gamma - k;
    }
    out.r.push_back(r);
    out.u.push_back(j[0]);
    out.jets.push_back(j);
  }
  out.validate();
  return out;
}

RadialProfile delaunay_profile(const DelaunayOrbit& orbit, double phase, std::span<const double> grid,
                               const DimensionParams& params) {
  if (!orbit.converged) throw DomainError("delaunay_profile needs a converged orbit");
  if (orbit.n != params.n) throw DomainError("orbit dimension does not match parameters");
  if (!std::isfinite(phase)) throw DomainError("phase must be finite");
  const CylinderOde ode(params);
  RadialProfile out;
  out.n = params.n;
  out.order = kMaxOrder;
  for (double r : grid) {
    if (!(r > 0.0)) throw DomainError("profile radii must be positive");
    const Jet6 v = orbit.jet_at(std::log(r) + phase);
    // w(s) = v(s + T) with s = ln r.
    Jet7 w{};
    std::copy(v.begin(), v.end(), w.begin());
    w[6] = ode.sixth(v);
    const Jet7 u = radial_jet_from_log(w, r, params.gamma, kMaxOrder);
    out.r.push_back(r);
    out.u.push_back(u[0]);
    out.jets.push_back(u);
  }
  out.validate();
  return out;
}

}  // namespace qcurv
