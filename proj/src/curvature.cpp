#include "qcurv/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qcurv/errors.hpp"
#include "qcurv/taylor.hpp"

namespace qcurv {
namespace {

constexpr std::array<std::array<double, 7>, 7> kBinomial = {{
    {1, 0, 0, 0, 0, 0, 0},
    {1, 1, 0, 0, 0, 0, 0},
    {1, 2, 1, 0, 0, 0, 0},
    {1, 3, 3, 1, 0, 0, 0},
    {1, 4, 6, 4, 1, 0, 0},
    {1, 5, 10, 10, 5, 1, 0},
    {1, 6, 15, 20, 15, 6, 1},
}};

void require_jets(const RadialProfile& profile, int order, const char* what) {
  profile.validate();
  if (!profile.has_jets(order)) {
    throw DomainError(std::string(what) + " needs radial jets through order " + std::to_string(order));
  }
}

void finalize(CurvatureReport& report) {
  if (report.value.empty()) return;
  const auto it = std::min_element(report.value.begin(), report.value.end());
  report.min = *it;
  report.r_at_min = report.r[static_cast<std::size_t>(it - report.value.begin())];
}

// Jet of u^a through `order` from the jet of u, via the power series.
Jet7 power_jet(const Jet7& u, double a, int order) {
  const TaylorSeries s = TaylorSeries::from_jet(std::span<const double>(u.data(), static_cast<std::size_t>(order) + 1));
  const std::vector<double> jet = pow(s, a).to_jet();
  Jet7 out{};
  std::copy(jet.begin(), jet.end(), out.begin());
  return out;
}

struct RadialPieces {
  double lap;        // Delta u
  double bilap;      // Delta^2 u
  double grad2;      // |grad u|^2
  double grad_lap;   // <grad u, grad Delta u>
  double hess2;      // |D^2 u|^2
  double hess_grad;  // D^2 u (grad u, grad u)
};

RadialPieces pieces(const Jet7& u, double r, int n) {
  const Jet7 L1 = radial_laplacian_jet(u, r, n, 4);
  const Jet7 L2 = radial_laplacian_jet(L1, r, n, 2);
  RadialPieces p{};
  p.lap = L1[0];
  p.bilap = L2[0];
  p.grad2 = u[1] * u[1];
  p.grad_lap = u[1] * L1[1];
  p.hess2 = u[2] * u[2] + (n - 1) * (u[1] / r) * (u[1] / r);
  p.hess_grad = u[2] * u[1] * u[1];
  return p;
}

// Terms of the expanded Delta^2(u^a); their sum is the bi-Laplacian.
std::array<double, 7> bilaplacian_terms(const Jet7& u, double r, int n, double a) {
  const RadialPieces p = pieces(u, r, n);
  const double v = u[0];
  return {
      a * std::pow(v, a - 1) * p.bilap,
      4 * a * (a - 1) * std::pow(v, a - 2) * p.grad_lap,
      2 * a * (a - 1) * std::pow(v, a - 2) * p.hess2,
      a * (a - 1) * std::pow(v, a - 2) * p.lap * p.lap,
      4 * a * (a - 1) * (a - 2) * std::pow(v, a - 3) * p.hess_grad,
      2 * a * (a - 1) * (a - 2) * std::pow(v, a - 3) * p.grad2 * p.lap,
      a * (a - 1) * (a - 2) * (a - 3) * std::pow(v, a - 4) * p.grad2 * p.grad2,
  };
}

// The expansion exactly as printed in the source: no (Delta u)^2 term and a
// different |grad u|^4 coefficient.
double bilaplacian_printed(const Jet7& u, double r, int n) {
  const RadialPieces p = pieces(u, r, n);
  const double v = u[0];
  const double m = n - 6.0;
  return (n - 4.0) / m * std::pow(v, 2 / m) * p.bilap +
         8 * (n - 4.0) / (m * m) * std::pow(v, (8.0 - n) / m) * p.grad_lap +
         4 * (n - 4.0) / (m * m) * std::pow(v, (8.0 - n) / m) * p.hess2 +
         8 * (n - 4.0) * (8.0 - n) / (m * m * m) * std::pow(v, -2 * (n - 7.0) / m) * p.hess_grad +
         4 * (n - 4.0) * (8.0 - n) / (m * m * m) * std::pow(v, -2 * (n - 7.0) / m) * p.grad2 * p.lap +
         2 * (n - 7.0) * (n - 8.0) / (m * m * m * m) * std::pow(v, (20.0 - 3 * n) / m) * p.grad2 * p.grad2;
}

// Literal printed Q4(u), with its non-homogeneous exponents.
double q4_printed_literal(const Jet7& u, double r, int n) {
  const RadialPieces p = pieces(u, r, n);
  const double v = u[0];
  const double m = n - 6.0;
  return p.bilap - 8 / m * std::pow(v, (8.0 - n) / 2) * p.grad_lap - 4 / m * std::pow(v, (8.0 - n) / 2) * p.hess2 -
         8 * (8.0 - n) / (m * m) * std::pow(v, 7.0 - n) * p.hess_grad -
         4 * (8.0 - n) / (m * m) * std::pow(v, 7.0 - n) * p.grad2 * p.lap -
         2 * (n - 7.0) * (n - 8.0) / (m * m * m * (n - 4.0)) * std::pow(v, (20.0 - 3 * n) / 2) * p.grad2 * p.grad2;
}

double relative_defect(double x, double y, double scale) {
  const double d = std::abs(x - y);
  return scale > 0.0 ? d / scale : d;
}

}  // namespace

double CurvatureReport::max_abs() const {
  double m = 0.0;
  for (double x : value) m = std::max(m, std::abs(x));
  return m;
}

double CurvatureReport::max_abs_relative() const {
  double m = 0.0;
  for (double x : relative) m = std::max(m, std::abs(x));
  return m;
}

double CurvatureReport::constancy() const {
  if (value.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(value.begin(), value.end());
  return *hi / *lo - 1.0;
}

Jet7 radial_laplacian_jet(const Jet7& f, double r, int n, int order) {
  if (order < 2 || order > 6) throw DomainError("radial Laplacian needs a jet of order 2..6");
  if (!(r > 0.0)) throw DomainError("radial Laplacian needs r > 0");
  // g = f'' + (n-1) f' / r; d^m/dr^m (1/r) = (-1)^m m! / r^{m+1}.
  std::array<double, 7> inv{};
  double fact = 1.0, rp = r;
  for (int m = 0; m <= 6; ++m) {
    if (m > 0) {
      fact *= m;
      rp *= r;
    }
    inv[m] = (m % 2 == 0 ? 1.0 : -1.0) * fact / rp;
  }
  Jet7 g{};
  for (int k = 0; k <= order - 2; ++k) {
    double acc = 0.0;
    for (int j = 0; j <= k; ++j) acc += kBinomial[k][j] * f[j + 1] * inv[k - j];
    g[k] = f[k + 2] + (n - 1) * acc;
  }
  return g;
}

CurvatureReport tri_laplacian_residual(const RadialProfile& profile, const DimensionParams& params) {
  require_jets(profile, 6, "tri_laplacian_residual");
  const int n = params.n;
  auto minus_tri = [n](const Jet7& f, double r) {
    const Jet7 L1 = radial_laplacian_jet(f, r, n, 6);
    const Jet7 L2 = radial_laplacian_jet(L1, r, n, 4);
    const Jet7 L3 = radial_laplacian_jet(L2, r, n, 2);
    return -L3[0];
  };
  CurvatureReport report;
  report.quantity = "tri_laplacian_residual";
  for (std::size_t i = 0; i < profile.size(); ++i) {
    const double r = profile.r[i];
    const Jet7& u = profile.jets[i];
    const double source = params.cn * std::pow(u[0], params.p);
    // (-Delta)^3 u = sum_k a_k(r) u^(k); a_k from the unit jets.
    double scale = source;
    for (int k = 0; k <= 6; ++k) {
      Jet7 e{};
      e[k] = 1.0;
      scale += std::abs(minus_tri(e, r) * u[k]);
    }
    const double residual = minus_tri(u, r) - source;
    report.r.push_back(r);
    report.value.push_back(residual);
    report.relative.push_back(residual / scale);
  }
  finalize(report);
  return report;
}

CurvatureReport scalar_curvature_radial(const RadialProfile& profile, const DimensionParams& params) {
  require_jets(profile, 2, "scalar_curvature_radial");
  const double n = params.n, m = n - 6.0;
  CurvatureReport report;
  report.quantity = "scalar_curvature";
  for (std::size_t i = 0; i < profile.size(); ++i) {
    const double r = profile.r[i];
    const Jet7& u = profile.jets[i];
    const double lap = u[2] + (n - 1) * u[1] / r;
    const double q = -4 * (n - 1) / m * std::pow(u[0], -(n - 2) / m) * (lap + 4 / m * u[1] * u[1] / u[0]);
    report.r.push_back(r);
    report.value.push_back(q);
  }
  finalize(report);
  return report;
}

double scalar_curvature_sign_link(const RadialProfile& profile, const DimensionParams& params) {
  require_jets(profile, 2, "scalar_curvature_sign_link");
  const double n = params.n, m = n - 6.0, b = (n - 2) / m;
  double worst = 0.0;
  for (std::size_t i = 0; i < profile.size(); ++i) {
    const double r = profile.r[i];
    const Jet7& u = profile.jets[i];
    const Jet7 ub = power_jet(u, b, 2);
    const double direct = -radial_laplacian_jet(ub, r, params.n, 2)[0];
    const double lap = u[2] + (n - 1) * u[1] / r;
    const double grad = 4 / m * u[1] * u[1] / u[0];
    const double factor = b * std::pow(u[0], 4 / m);
    const double expanded = factor * (-lap - grad);
    const double scale = factor * (std::abs(u[2]) + (n - 1) * std::abs(u[1]) / r + grad);
    worst = std::max(worst, relative_defect(direct, expanded, scale));
  }
  return worst;
}

double bilaplacian_of_power(const Jet7& u, double r, int n, double a) {
  const auto terms = bilaplacian_terms(u, r, n, a);
  double sum = 0.0;
  for (double t : terms) sum += t;
  return sum;
}

Q4Report q4_curvature_radial(const RadialProfile& profile, const DimensionParams& params) {
  require_jets(profile, 4, "q4_curvature_radial");
  const int n = params.n;
  const double m = n - 6.0, a = (n - 4.0) / m;
  Q4Report out;
  out.q4.quantity = "q4_curvature";
  for (std::size_t i = 0; i < profile.size(); ++i) {
    const double r = profile.r[i];
    const Jet7& u = profile.jets[i];
    const double prefactor = 2.0 / (n - 4.0) * std::pow(u[0], -(n + 4.0) / m);

    const Jet7 ua = power_jet(u, a, 4);
    const double route_b = radial_laplacian_jet(radial_laplacian_jet(ua, r, n, 4), r, n, 2)[0];
    const auto terms = bilaplacian_terms(u, r, n, a);
    double route_a = 0.0, magnitude = 0.0;
    for (double t : terms) {
      route_a += t;
      magnitude += std::abs(t);
    }
    const double printed = bilaplacian_printed(u, r, n);

    out.q4.r.push_back(r);
    out.q4.value.push_back(prefactor * route_b);
    out.route_a.push_back(prefactor * route_a);
    out.printed.push_back(prefactor * printed);
    out.max_route_defect = std::max(out.max_route_defect, relative_defect(route_a, route_b, magnitude));
    out.max_printed_defect = std::max(out.max_printed_defect, relative_defect(printed, route_b, magnitude));
  }
  finalize(out.q4);
  return out;
}

ModicaReport modica_quantities(const RadialProfile& profile, const DimensionParams& params) {
  require_jets(profile, 4, "modica_quantities");
  const int n = params.n;
  const double m = n - 6.0, a = (n - 4.0) / m;
  const double c = std::sqrt(m / n);
  ModicaReport out;
  out.q2.quantity = "Q2";
  out.q4.quantity = "Q4";
  out.q2_margin.quantity = "Q2_margin";
  out.q4_margin.quantity = "Q4_margin";
  for (std::size_t i = 0; i < profile.size(); ++i) {
    const double r = profile.r[i];
    const Jet7& u = profile.jets[i];
    const double lap = u[2] + (n - 1) * u[1] / r;
    const double q2 = -lap - 4 / m * u[1] * u[1] / u[0];
    const Jet7 ua = power_jet(u, a, 4);
    const double bilap = radial_laplacian_jet(radial_laplacian_jet(ua, r, n, 4), r, n, 2)[0];
    const double q4 = bilap / (a * std::pow(u[0], a - 1));
    const double bound = c * std::pow(u[0], n / m);
    for (CurvatureReport* rep : {&out.q2, &out.q4, &out.q2_margin, &out.q4_margin}) rep->r.push_back(r);
    out.q2.value.push_back(q2);
    out.q4.value.push_back(q4);
    out.q2_margin.value.push_back(q2 - bound);
    out.q4_margin.value.push_back(q4 - bound);
    out.q4_printed.push_back(q4_printed_literal(u, r, n));
  }
  for (CurvatureReport* rep : {&out.q2, &out.q4, &out.q2_margin, &out.q4_margin}) finalize(*rep);
  return out;
}

double geodesic_sphere_mean_curvature(double r, int n) {
  if (!(r > 0.0)) throw DomainError("sphere radius must be positive");
  if (n < 2) throw DomainError("dimension must be at least 2");
  return (n - 1) * (1 - r * r) / (2 * r);
}

double geodesic_sphere_mean_curvature_fd(double r, int n, double h) {
  if (!(r > 0.0)) throw DomainError("sphere radius must be positive");
  // Area (2r / (1 + r^2))^{n-1} |S^{n-1}|; arclength along the radial unit normal s = 2 atan r.
  auto log_area = [n](double x) { return (n - 1) * std::log(2 * x / (1 + x * x)); };
  const double dr = h * r;
  const double ds = 2 * (std::atan(r + dr) - std::atan(r - dr));
  return (log_area(r + dr) - log_area(r - dr)) / ds;
}

}  // namespace qcurv
