#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace qcurv {

/// Truncated Taylor series c[0] + c[1] h + ... + c[d] h^d about a fixed point.
///
/// Arithmetic is exact up to rounding in the retained coefficients, so the
/// derivative jet of a closed-form expression follows from building it out
/// of these operations (`to_jet` multiplies c[k] by k!).
class TaylorSeries {
 public:
  TaylorSeries() = default;
  explicit TaylorSeries(std::size_t degree, double value = 0.0);

  /// x0 + h, the identity function expanded at x0.
  static TaylorSeries variable(double x0, std::size_t degree);
  /// Series with coefficients jet[k] / k! (jet[k] = k-th derivative).
  static TaylorSeries from_jet(std::span<const double> jet);

  std::size_t degree() const { return c_.size() - 1; }
  double operator[](std::size_t k) const { return c_[k]; }
  double& operator[](std::size_t k) { return c_[k]; }
  std::span<const double> coefficients() const { return c_; }

  /// Derivatives 0..degree at the expansion point.
  std::vector<double> to_jet() const;

  TaylorSeries& operator+=(const TaylorSeries& o);
  TaylorSeries& operator-=(const TaylorSeries& o);
  TaylorSeries& operator*=(double s);
  TaylorSeries& operator+=(double s);

  friend TaylorSeries operator+(TaylorSeries a, const TaylorSeries& b) { return a += b; }
  friend TaylorSeries operator-(TaylorSeries a, const TaylorSeries& b) { return a -= b; }
  friend TaylorSeries operator*(TaylorSeries a, double s) { return a *= s; }
  friend TaylorSeries operator*(double s, TaylorSeries a) { return a *= s; }
  friend TaylorSeries operator+(TaylorSeries a, double s) { return a += s; }
  friend TaylorSeries operator*(const TaylorSeries& a, const TaylorSeries& b);
  friend TaylorSeries operator-(TaylorSeries a) { return a *= -1.0; }

 private:
  std::vector<double> c_;
};

/// f^a for f[0] > 0 (any real a).
TaylorSeries pow(const TaylorSeries& f, double a);
TaylorSeries exp(const TaylorSeries& f);
TaylorSeries cosh(const TaylorSeries& f);
TaylorSeries reciprocal(const TaylorSeries& f);

}  // namespace qcurv
