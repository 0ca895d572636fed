#include "qcurv/taylor.hpp"

#include <algorithm>
#include <cmath>

#include "qcurv/errors.hpp"

namespace qcurv {

TaylorSeries::TaylorSeries(std::size_t degree, double value) : c_(degree + 1, 0.0) { c_[0] = value; }

TaylorSeries TaylorSeries::variable(double x0, std::size_t degree) {
  TaylorSeries s(degree, x0);
  if (degree >= 1) s.c_[1] = 1.0;
  return s;
}

TaylorSeries TaylorSeries::from_jet(std::span<const double> jet) {
  if (jet.empty()) throw DomainError("empty jet");
  TaylorSeries s(jet.size() - 1);
  double factorial = 1.0;
  for (std::size_t k = 0; k < jet.size(); ++k) {
    if (k > 0) factorial *= static_cast<double>(k);
    s.c_[k] = jet[k] / factorial;
  }
  return s;
}

std::vector<double> TaylorSeries::to_jet() const {
  std::vector<double> jet(c_.size());
  double factorial = 1.0;
  for (std::size_t k = 0; k < c_.size(); ++k) {
    if (k > 0) factorial *= static_cast<double>(k);
    jet[k] = c_[k] * factorial;
  }
  return jet;
}

TaylorSeries& TaylorSeries::operator+=(const TaylorSeries& o) {
  const std::size_t d = std::min(c_.size(), o.c_.size());
  c_.resize(d);
  for (std::size_t k = 0; k < d; ++k) c_[k] += o.c_[k];
  return *this;
}

TaylorSeries& TaylorSeries::operator-=(const TaylorSeries& o) {
  const std::size_t d = std::min(c_.size(), o.c_.size());
  c_.resize(d);
  for (std::size_t k = 0; k < d; ++k) c_[k] -= o.c_[k];
  return *this;
}

TaylorSeries& TaylorSeries::operator*=(double s) {
  for (double& x : c_) x *= s;
  return *this;
}

TaylorSeries& TaylorSeries::operator+=(double s) {
  c_[0] += s;
  return *this;
}

TaylorSeries operator*(const TaylorSeries& a, const TaylorSeries& b) {
  const std::size_t d = std::min(a.degree(), b.degree());
  TaylorSeries out(d);
  for (std::size_t k = 0; k <= d; ++k) {
    double acc = 0.0;
    for (std::size_t j = 0; j <= k; ++j) acc += a[j] * b[k - j];
    out[k] = acc;
  }
  return out;
}

TaylorSeries pow(const TaylorSeries& f, double a) {
  if (!(f[0] > 0.0)) throw DomainError("Taylor pow requires a positive constant term");
  // g = f^a satisfies f g' = a f' g; compare coefficients of h^(k-1).
  const std::size_t d = f.degree();
  TaylorSeries g(d, std::pow(f[0], a));
  for (std::size_t k = 1; k <= d; ++k) {
    double acc = 0.0;
    for (std::size_t j = 1; j <= k; ++j) {
      acc += ((a + 1.0) * static_cast<double>(j) - static_cast<double>(k)) * f[j] * g[k - j];
    }
    g[k] = acc / (static_cast<double>(k) * f[0]);
  }
  return g;
}

TaylorSeries exp(const TaylorSeries& f) {
  const std::size_t d = f.degree();
  TaylorSeries e(d, std::exp(f[0]));
  for (std::size_t k = 1; k <= d; ++k) {
    double acc = 0.0;
    for (std::size_t j = 1; j <= k; ++j) acc += static_cast<double>(j) * f[j] * e[k - j];
    e[k] = acc / static_cast<double>(k);
  }
  return e;
}

TaylorSeries cosh(const TaylorSeries& f) { return 0.5 * (exp(f) + exp(-f)); }

TaylorSeries reciprocal(const TaylorSeries& f) {
  if (f[0] == 0.0) throw DomainError("Taylor reciprocal of a series with zero constant term");
  const std::size_t d = f.degree();
  TaylorSeries g(d, 1.0 / f[0]);
  for (std::size_t k = 1; k <= d; ++k) {
    double acc = 0.0;
    for (std::size_t j = 1; j <= k; ++j) acc += f[j] * g[k - j];
    g[k] = -acc / f[0];
  }
  return g;
}

}  // namespace qcurv
