#include "qcurv/dimension.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "qcurv/errors.hpp"

namespace qcurv {
namespace {

using boost::multiprecision::cpp_rational;

struct ExactConstants {
  cpp_rational mu1, mu2, mu3, K4, K2, K0, Qn, cn, J0, J1, J2, J3, L0;
};

ExactConstants exact_constants(int n_int) {
  const cpp_rational n = n_int;
  ExactConstants e;
  e.mu1 = (n - 6) * (n - 6) / 4;
  e.mu2 = (n - 2) * (n - 2) / 4;
  e.mu3 = (n + 2) * (n + 2) / 4;
  e.K4 = (3 * n * n - 12 * n + 44) / 4;
  e.K2 = (3 * n * n * n * n - 24 * n * n * n + 72 * n * n - 96 * n + 304) / 16;
  e.K0 = e.mu1 * e.mu2 * e.mu3;
  e.Qn = n * (n * n * n * n - 20 * n * n + 64) / 32;
  e.cn = (n - 6) / 2 * e.Qn;
  e.J0 = (3 * n * n * n * n - 18 * n * n * n - 192 * n * n + 1864 * n - 3952) / 8;
  e.J1 = (3 * n * n * n + 3 * n * n - 244 * n + 620) / 2;
  e.J2 = 2 * n * n + 13 * n - 68;
  e.J3 = 2 * (n + 1);
  e.L0 = (3 * n * n - 12 * n - 20) / 4;
  return e;
}

double to_double(const cpp_rational& q) { return q.convert_to<double>(); }

void require_dimension(int n) {
  if (n < 7) {
    throw DomainError("dimension n = " + std::to_string(n) +
                      " is not allowed: the sixth-order problem requires n >= 7");
  }
}

double relative(double defect, double scale) { return scale != 0 ? defect / std::abs(scale) : defect; }

}  // namespace

double sphere_area(int k) {
  if (k < 0) throw DomainError("sphere dimension must be non-negative");
  // |S^k| = 2 pi / (k - 1) |S^{k-2}|, |S^0| = 2, |S^1| = 2 pi.
  double area = (k % 2 == 0) ? 2.0 : 2.0 * std::numbers::pi;
  for (int j = (k % 2 == 0) ? 2 : 3; j <= k; j += 2) area *= 2.0 * std::numbers::pi / (j - 1);
  return area;
}

DimensionParams make_params(int n) {
  require_dimension(n);
  const ExactConstants e = exact_constants(n);

  DimensionParams params;
  params.n = n;
  params.gamma = (n - 6) / 2.0;
  params.p = static_cast<double>(n + 6) / (n - 6);
  params.Qn = to_double(e.Qn);
  params.cn = to_double(e.cn);
  params.K0 = to_double(e.K0);
  params.K2 = to_double(e.K2);
  params.K4 = to_double(e.K4);
  params.mu1 = to_double(e.mu1);
  params.mu2 = to_double(e.mu2);
  params.mu3 = to_double(e.mu3);
  params.J0 = to_double(e.J0);
  params.J1 = to_double(e.J1);
  params.J2 = to_double(e.J2);
  params.J3 = to_double(e.J3);
  params.L0 = to_double(e.L0);
  // K0 / cn reduces to (n-6)(n-2)(n+2) / (n (n-4)(n+4)); keep it exact until the power.
  params.eps_star = std::pow(to_double(e.K0 / e.cn), (n - 6) / 12.0);
  params.omega = sphere_area(n - 1);
  return params;
}

double cylinder_constant(const DimensionParams& params) {
  require_dimension(params.n);
  return std::pow(params.K0 / params.cn, (params.n - 6) / 12.0);
}

double FactorizationReport::max_defect() const {
  return std::max({k4_defect, k2_defect, k0_defect});
}

FactorizationReport verify_factorization(const DimensionParams& params) {
  require_dimension(params.n);
  const ExactConstants e = exact_constants(params.n);

  FactorizationReport report;
  report.n = params.n;
  report.exact = e.K4 == e.mu1 + e.mu2 + e.mu3 &&
                 e.K2 == e.mu1 * e.mu2 + e.mu1 * e.mu3 + e.mu2 * e.mu3 &&
                 e.K0 == e.mu1 * e.mu2 * e.mu3;

  const double m1 = params.mu1, m2 = params.mu2, m3 = params.mu3;
  report.k4_defect = relative(std::abs(params.K4 - (m1 + m2 + m3)), params.K4);
  report.k2_defect = relative(std::abs(params.K2 - (m1 * m2 + m1 * m3 + m2 * m3)), params.K2);
  report.k0_defect = relative(std::abs(params.K0 - m1 * m2 * m3), params.K0);

  const cpp_rational n = params.n;
  const cpp_rational printed = (n - 6) * (n - 6) * (n - 2) * (n - 2) * (n + 2) * (n + 2) / 256;
  report.printed_k0 = to_double(printed);
  report.k0_over_printed = to_double(e.K0 / printed);

  const double eps = params.eps_star;
  const double lhs = params.K0 * eps;
  report.eps_star_residual = std::abs(lhs - params.cn * std::pow(eps, params.p)) / lhs;
  return report;
}

}  // namespace qcurv
