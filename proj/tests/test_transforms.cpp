#include <doctest.h>

#include <cmath>
#include <random>

#include "qcurv/errors.hpp"
#include "qcurv/shooting.hpp"
#include "qcurv/transforms.hpp"
#include "support.hpp"

using namespace qcurv;
using qcurv::test::profile_from;

namespace {

RadialProfile random_profile(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  const double a = 1.0 + 0.5 * U(rng), b = 0.4 * U(rng), c = 0.3 * U(rng), k = 0.5 + 0.4 * U(rng);
  return profile_from(n, log_grid(0.05, 20.0, 60), [&](const TaylorSeries& x) {
    return pow(x * x * (k * k) + 1.0, -0.5) * b + exp(x * (0.1 * c)) * a + pow(x, -1.3) * 0.2;
  });
}

}  // namespace

TEST_CASE("forward transform of the cylinder factor is constant") {
  for (int n : {7, 9, 12}) {
    const DimensionParams P = make_params(n);
    const auto grid = log_grid(1e-3, 1e3, 41);
    const CylinderProfile c = emden_fowler_forward(cylinder_profile(P, grid, 1.0), P);
    for (std::size_t i = 0; i < c.size(); ++i) {
      CHECK(c.v[i] == doctest::Approx(1.0).epsilon(1e-14));
      // Chain-rule terms of size up to ~Gamma(gamma + 7) / Gamma(gamma) cancel here.
      for (int k = 1; k <= 6; ++k) CHECK(std::abs(c.jets[i][k]) < 1e-9);
    }
  }
}

TEST_CASE("forward transform of the bubble is (cosh t)^-gamma with exact jets") {
  for (int n : {7, 9}) {
    const DimensionParams P = make_params(n);
    const auto grid = log_grid(0.05, 20.0, 33);
    const CylinderProfile c = emden_fowler_forward(spherical_profile(P, grid), P);
    for (std::size_t i = 0; i < c.size(); ++i) {
      CHECK(c.t[i] == doctest::Approx(-std::log(grid[i])).epsilon(1e-15));
      const auto j = pow(cosh(TaylorSeries::variable(c.t[i], 6)), -P.gamma).to_jet();
      for (int k = 0; k <= 6; ++k) CHECK(c.jets[i][k] == doctest::Approx(j[k]).epsilon(1e-11).scale(1.0));
    }
  }
}

TEST_CASE("inverse transform of closed forms") {
  const DimensionParams P = make_params(7);
  CylinderProfile c;
  c.n = 7;
  c.order = 6;
  for (double t = 3.0; t >= -3.0; t -= 0.25) {
    c.t.push_back(t);
    const auto j = pow(cosh(TaylorSeries::variable(t, 6)), -P.gamma).to_jet();
    Jet7 jet{};
    std::copy_n(j.begin(), 7, jet.begin());
    c.v.push_back(jet[0]);
    c.jets.push_back(jet);
  }
  const RadialProfile u = emden_fowler_inverse(c, P);
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double r = u.r[i];
    CHECK(r == doctest::Approx(std::exp(-c.t[i])).epsilon(1e-15));
    const auto j = pow((TaylorSeries::variable(r, 6) * TaylorSeries::variable(r, 6) + 1.0) * 0.5, -P.gamma).to_jet();
    // Terms of size ~ r^-k cancel to O(1) near the origin.
    for (int k = 0; k <= 6; ++k) {
      CAPTURE(r);
      CAPTURE(k);
      CHECK(std::abs(u.jets[i][k] - j[k]) < 1e-13 * std::max(std::abs(j[k]), std::pow(r, -k)));
    }
  }

  CylinderProfile flat;
  flat.n = 7;
  flat.t = {2.0, 1.0, 0.0, -1.0};
  flat.v.assign(4, P.eps_star);
  const RadialProfile uc = emden_fowler_inverse(flat, P);
  for (std::size_t i = 0; i < uc.size(); ++i) {
    CHECK(uc.u[i] == doctest::Approx(P.eps_star * std::pow(uc.r[i], -P.gamma)).epsilon(1e-15));
  }
}

TEST_CASE("round trip on random positive profiles") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 7 + trial % 4;
    const DimensionParams P = make_params(n);
    const RadialProfile u = random_profile(n, rng);
    const RadialProfile back = emden_fowler_inverse(emden_fowler_forward(u, P), P);
    REQUIRE(back.size() == u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
      CHECK(std::abs(back.r[i] / u.r[i] - 1) < 1e-12);
      CHECK(std::abs(back.u[i] / u.u[i] - 1) < 1e-12);
      for (int k = 1; k <= 6; ++k) {
        CHECK(std::abs(back.jets[i][k] - u.jets[i][k]) <= 1e-12 * (std::abs(u.jets[i][k]) + std::abs(u.jets[i][0]) * std::pow(u.r[i], -k)));
      }
    }
  }
}

TEST_CASE("non-positive radii are rejected") {
  const DimensionParams P = make_params(7);
  RadialProfile bad;
  bad.n = 7;
  bad.r = {0.0, 1.0};
  bad.u = {1.0, 1.0};
  CHECK_THROWS_AS(emden_fowler_forward(bad, P), DomainError);
  bad.r = {-1.0, 1.0};
  CHECK_THROWS_AS(emden_fowler_forward(bad, P), DomainError);
}

TEST_CASE("cylinder jets agree with finite differences at order h^2") {
  const DimensionParams P = make_params(7);
  auto fn = [](const TaylorSeries& x) { return pow(x * x + 1.0, -0.25) + exp(x * 0.3) * 0.5; };
  const double t0 = 0.4;
  double prev[6] = {};
  for (int level = 0; level < 3; ++level) {
    const double h = 0.02 / std::pow(2.0, level);
    const std::vector<double> grid = {std::exp(-(t0 + h)), std::exp(-t0), std::exp(-(t0 - h))};
    const CylinderProfile c = emden_fowler_forward(profile_from(7, grid, fn), P);
    // Samples are ordered by radius, so index 0 is t0 + h.
    for (int k = 0; k < 6; ++k) {
      const double fd = (c.jets[0][k] - c.jets[2][k]) / (2 * h);
      const double err = std::abs(fd - c.jets[1][k + 1]);
      if (level > 0) CHECK(err / prev[k] == doctest::Approx(0.25).epsilon(0.05));
      prev[k] = err;
    }
  }
}

TEST_CASE("scaling law") {
  const DimensionParams P = make_params(7);
  const auto grid = log_grid(0.1, 10.0, 25);
  const RadialProfile sph = spherical_profile(P, grid);

  const RadialProfile same = scaling_law(sph, 1.0, P);
  for (std::size_t i = 0; i < sph.size(); ++i) {
    CHECK(same.r[i] == sph.r[i]);
    CHECK(same.u[i] == doctest::Approx(sph.u[i]).epsilon(1e-15));
  }

  const double lambda = 2.5;
  const RadialProfile scaled = scaling_law(sph, lambda, P);
  for (std::size_t i = 0; i < scaled.size(); ++i) {
    CHECK(scaled.u[i] == doctest::Approx(spherical_solution(scaled.r[i], lambda, P)).epsilon(1e-14));
  }
  const RadialProfile eps_profile = spherical_profile(P, grid, 0.7);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(eps_profile.u[i] == doctest::Approx(spherical_solution(grid[i], 0.7, P)).epsilon(1e-15));
  }

  const RadialProfile cyl = cylinder_profile(P, grid, P.eps_star);
  for (double l : {0.01, 0.5, 3.0, 100.0}) {
    const RadialProfile s = scaling_law(cyl, l, P);
    for (std::size_t i = 0; i < s.size(); ++i) {
      CHECK(s.u[i] == doctest::Approx(P.eps_star * std::pow(s.r[i], -P.gamma)).epsilon(1e-14));
      for (int k = 1; k <= 6; ++k) CHECK(s.jets[i][k] == doctest::Approx(cylinder_profile(P, std::vector<double>{s.r[i]}, P.eps_star).jets[0][k]).epsilon(1e-13));
    }
  }
  CHECK_THROWS_AS(scaling_law(sph, 0.0, P), DomainError);
  CHECK_THROWS_AS(scaling_law(sph, -1.0, P), DomainError);
}

TEST_CASE("transform intertwines scaling with translation") {
  const DimensionParams P = make_params(9);
  std::mt19937_64 rng(3);
  const RadialProfile u = random_profile(9, rng);
  const double lambda = 1.7;
  const CylinderProfile a = emden_fowler_forward(scaling_law(u, lambda, P), P);
  const CylinderProfile b = emden_fowler_forward(u, P);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a.t[i] == doctest::Approx(b.t[i] + std::log(lambda)).epsilon(1e-13).scale(1.0));
    for (int k = 0; k <= 6; ++k) CHECK(a.jets[i][k] == doctest::Approx(b.jets[i][k]).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("spherical solution values") {
  const DimensionParams P7 = make_params(7);
  const DimensionParams P9 = make_params(9);
  CHECK(spherical_solution(0.0, 0.5, P7) == 1.0);
  CHECK(spherical_solution(0.0, 0.5, P9) == 1.0);
  CHECK(spherical_solution(1.0, 1.0, P7) == doctest::Approx(1.0).epsilon(1e-15));
  for (double d : {0.0, 0.3, 1.0, 4.0}) {
    CHECK(spherical_solution(d, 1.0, P9) == doctest::Approx(std::pow((1 + d * d) / 2, -P9.gamma)).epsilon(1e-15));
  }
}

TEST_CASE("Delaunay profile reconstruction") {
  const DimensionParams P = make_params(7);
  const auto grid = log_grid(1e-4, 1.0, 200);

  const DelaunayOrbit flat = find_orbit(P, P.eps_star);
  for (double T : {0.0, 1.3, 4.0}) {
    const RadialProfile u = delaunay_profile(flat, T, grid, P);
    for (std::size_t i = 0; i < u.size(); ++i) {
      CHECK(u.u[i] == doctest::Approx(P.eps_star * std::pow(grid[i], -P.gamma)).epsilon(1e-14));
    }
  }

  const DelaunayOrbit orbit = find_orbit(P, 0.7 * P.eps_star);
  const RadialProfile a = delaunay_profile(orbit, 0.9, grid, P);
  const RadialProfile b = delaunay_profile(orbit, 0.9 + orbit.period, grid, P);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(std::abs(b.u[i] / a.u[i] - 1) < 1e-10);
  }

  // The minimum of r^gamma u sits where ln r + T is a multiple of the period.
  const double T = 2.0;
  std::vector<double> fine;
  for (int i = 0; i <= 400; ++i) fine.push_back(std::exp(-T + orbit.period * (i / 400.0 - 1)));
  const RadialProfile c = delaunay_profile(orbit, T, fine, P);
  double lo = 1e300;
  for (std::size_t i = 0; i < c.size(); ++i) lo = std::min(lo, std::pow(c.r[i], P.gamma) * c.u[i]);
  CHECK(std::abs(lo - orbit.eps0) < 1e-9);

  DelaunayOrbit unconverged = orbit;
  unconverged.converged = false;
  CHECK_THROWS_AS(delaunay_profile(unconverged, 0.0, grid, P), DomainError);
}
