#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qcurv/dimension.hpp"
#include "qcurv/errors.hpp"

using namespace qcurv;

TEST_CASE("constants at n = 7") {
  const DimensionParams P = make_params(7);
  CHECK(P.K4 == 26.75);
  CHECK(P.K2 == 133.1875);
  CHECK(P.K0 == 31.640625);
  CHECK(P.mu1 == 0.25);
  CHECK(P.mu2 == 6.25);
  CHECK(P.mu3 == 20.25);
  CHECK(P.Qn == 324.84375);
  CHECK(P.cn == 162.421875);
  CHECK(P.gamma == 0.5);
  CHECK(P.p == 13.0);
  CHECK(P.eps_star == doctest::Approx(0.8725695321584247723).epsilon(1e-15));
  CHECK(P.omega == doctest::Approx(16 * std::pow(std::numbers::pi, 3) / 15).epsilon(1e-14));
}

TEST_CASE("cylinder necksize for n = 8, 9, 10") {
  CHECK(make_params(8).eps_star == doctest::Approx(0.82377448622103285124).epsilon(1e-15));
  CHECK(make_params(9).eps_star == doctest::Approx(0.7927094371191640355).epsilon(1e-15));
  CHECK(make_params(10).eps_star == doctest::Approx(0.77034271422167152778).epsilon(1e-15));
}

TEST_CASE("dimension below 7 is rejected") {
  CHECK_THROWS_AS(make_params(6), DomainError);
  CHECK_THROWS_AS(make_params(0), DomainError);
  try {
    make_params(6);
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("n >= 7") != std::string::npos);
  }
}

TEST_CASE("identities hold for n = 7..20") {
  for (int n = 7; n <= 20; ++n) {
    CAPTURE(n);
    const DimensionParams P = make_params(n);
    const FactorizationReport rep = verify_factorization(P);
    CHECK(rep.exact);
    CHECK(rep.max_defect() == 0.0);
    CHECK(rep.k0_over_printed == 4.0);
    CHECK(rep.eps_star_residual < 1e-12);
    CHECK(P.mu1 > 0.0);
    CHECK(P.mu1 < P.mu2);
    CHECK(P.mu2 < P.mu3);
    CHECK(P.K0 > 0.0);
    CHECK(P.K2 > 0.0);
    CHECK(P.K4 > 0.0);
    CHECK(P.p > 1.0);
    CHECK(P.gamma > 0.0);
    CHECK(P.eps_star > 0.0);
    CHECK(P.eps_star < 1.0);
    CHECK(P.cn == doctest::Approx((n - 6) / 2.0 * n * (std::pow(n, 4) - 20.0 * n * n + 64) / 32).epsilon(1e-15));
    CHECK(cylinder_constant(P) == P.eps_star);
    const double e = P.eps_star;
    CHECK(std::abs(P.cn * std::pow(e, 12.0 / (n - 6)) - P.K0) / P.K0 < 1e-12);
  }
}

TEST_CASE("sphere areas") {
  CHECK(sphere_area(1) == doctest::Approx(2 * std::numbers::pi).epsilon(1e-15));
  CHECK(sphere_area(2) == doctest::Approx(4 * std::numbers::pi).epsilon(1e-15));
  CHECK(sphere_area(6) == doctest::Approx(16 * std::pow(std::numbers::pi, 3) / 15).epsilon(1e-15));
}
