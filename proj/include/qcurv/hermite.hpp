#pragma once

#include <span>

namespace qcurv {

/// Two-point Hermite interpolation on a step [t0, t0 + h].
///
/// `left[k]` and `right[k]` hold the k-th derivative (k = 0..m) at the two
/// ends; the interpolant has degree 2m + 1. Coefficients are written to
/// `coef` (size 2m + 2) in the normalized variable s = (t - t0) / h, lowest
/// degree first.
void hermite_fit(std::span<const double> left, std::span<const double> right, double h,
                 std::span<double> coef);

/// k-th derivative with respect to s of the polynomial with coefficients `coef` at s.
double polynomial_derivative(std::span<const double> coef, double s, int k);

}  // namespace qcurv
