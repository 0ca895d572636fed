#pragma once

namespace qcurv {

/// Dimension-dependent constants of the sixth-order constant Q-curvature
/// problem in R^n, n >= 7.
///
/// The radial cylinder operator is
///   P_rad = d^6/dt^6 - K4 d^4/dt^4 + K2 d^2/dt^2 - K0
///         = (-d^2 + mu1)(-d^2 + mu2)(-d^2 + mu3)  (up to sign),
/// so K4, K2, K0 are the elementary symmetric functions of mu1 < mu2 < mu3.
/// Immutable after construction.
struct DimensionParams {
  int n = 0;
  double gamma = 0;  ///< (n - 6) / 2
  double p = 0;      ///< critical exponent (n + 6) / (n - 6)
  double Qn = 0;     ///< n (n^4 - 20 n^2 + 64) / 32
  double cn = 0;     ///< (n - 6) / 2 * Qn
  double K0 = 0, K2 = 0, K4 = 0;
  double mu1 = 0, mu2 = 0, mu3 = 0;  ///< ((n-6)/2)^2, ((n-2)/2)^2, ((n+2)/2)^2
  // Angular coefficients of the cylinder operator; no radial computation uses them.
  double J0 = 0, J1 = 0, J2 = 0, J3 = 0, L0 = 0;
  double eps_star = 0;  ///< necksize of the constant (cylinder) solution
  double omega = 0;     ///< area of the unit sphere S^{n-1}
};

/// Builds all constants for dimension `n` from exact rational expressions.
/// Throws DomainError unless n >= 7.
DimensionParams make_params(int n);

/// Defects of the symmetric-function identities tying K4, K2, K0 to the
/// factorization roots.
struct FactorizationReport {
  int n = 0;
  bool exact = false;  ///< identities hold in exact rational arithmetic
  double k4_defect = 0;  ///< |K4 - (mu1 + mu2 + mu3)| / K4 in the stored doubles
  double k2_defect = 0;  ///< |K2 - (mu1 mu2 + mu1 mu3 + mu2 mu3)| / K2
  double k0_defect = 0;  ///< |K0 - mu1 mu2 mu3| / K0
  double printed_k0 = 0;  ///< 2^-8 (n-6)^2 (n-2)^2 (n+2)^2, the alternative normalization
  double k0_over_printed = 0;  ///< K0 / printed_k0 (exactly 4)
  double eps_star_residual = 0;  ///< |K0 e - cn e^p| / (K0 e) at e = eps_star

  double max_defect() const;
};

FactorizationReport verify_factorization(const DimensionParams& params);

/// Unique positive constant solution v of K0 v = cn v^p, i.e. (K0/cn)^((n-6)/12).
double cylinder_constant(const DimensionParams& params);

/// Area of the unit sphere S^k in R^{k+1}.
double sphere_area(int k);

}  // namespace qcurv
