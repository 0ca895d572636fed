#include "qcurv/hermite.hpp"

#include <array>
#include <cassert>
#include <vector>

#include "qcurv/errors.hpp"

namespace qcurv {

void hermite_fit(std::span<const double> left, std::span<const double> right, double h,
                 std::span<double> coef) {
  const std::size_t m1 = left.size();
  if (right.size() != m1 || coef.size() != 2 * m1 || m1 == 0) {
    throw DomainError("hermite_fit: inconsistent jet sizes");
  }
  const std::size_t count = 2 * m1;

  // Confluent divided differences on nodes 0 (m1 times) and 1 (m1 times),
  // with derivatives rescaled to the s variable.
  std::vector<double> scaled_left(m1), scaled_right(m1);
  double hk = 1.0, factorial = 1.0;
  for (std::size_t k = 0; k < m1; ++k) {
    if (k > 0) {
      hk *= h;
      factorial *= static_cast<double>(k);
    }
    scaled_left[k] = left[k] * hk / factorial;
    scaled_right[k] = right[k] * hk / factorial;
  }
  auto node = [m1](std::size_t i) { return i < m1 ? 0.0 : 1.0; };

  // table[i] holds f[z_i, ..., z_{i+order}] for the current order.
  std::vector<double> table(count);
  std::vector<double> newton(count);
  for (std::size_t i = 0; i < count; ++i) table[i] = i < m1 ? scaled_left[0] : scaled_right[0];
  newton[0] = table[0];
  for (std::size_t order = 1; order < count; ++order) {
    for (std::size_t i = 0; i + order < count; ++i) {
      const double zi = node(i), zj = node(i + order);
      if (zi == zj) {
        table[i] = zi == 0.0 ? scaled_left[order] : scaled_right[order];
      } else {
        table[i] = (table[i + 1] - table[i]) / (zj - zi);
      }
    }
    newton[order] = table[0];
  }

  // Newton form -> monomial coefficients by nested multiplication.
  std::fill(coef.begin(), coef.end(), 0.0);
  coef[0] = newton[count - 1];
  std::size_t deg = 0;
  for (std::size_t k = count - 1; k-- > 0;) {
    const double z = node(k);
    // coef <- coef * (s - z) + newton[k]
    for (std::size_t j = deg + 1; j > 0; --j) coef[j] = coef[j - 1] - z * coef[j];
    coef[0] = -z * coef[0] + newton[k];
    ++deg;
  }
}

double polynomial_derivative(std::span<const double> coef, double s, int k) {
  const int n = static_cast<int>(coef.size());
  if (k >= n) return 0.0;
  double acc = 0.0;
  for (int j = n - 1; j >= k; --j) {
    double falling = 1.0;
    for (int i = 0; i < k; ++i) falling *= static_cast<double>(j - i);
    acc = acc * s + falling * coef[static_cast<std::size_t>(j)];
  }
  return acc;
}

}  // namespace qcurv
