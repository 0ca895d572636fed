#include <doctest.h>

#include <cmath>

#include "qcurv/errors.hpp"
#include "qcurv/integrator.hpp"
#include "qcurv/invariants.hpp"
#include "qcurv/shooting.hpp"
#include "support.hpp"

using namespace qcurv;
using qcurv::test::bubble_jet;

TEST_CASE("rhs") {
  const DimensionParams P = make_params(7);
  const Jet6 d = rhs(P, {0.0, {P.eps_star, 0, 0, 0, 0, 0}});
  for (double x : d) CHECK(x == 0.0);

  const Jet6 half = rhs(P, {0.0, {P.eps_star / 2, 0, 0, 0, 0, 0}});
  CHECK(half[5] == doctest::Approx(13.800952480759082072).epsilon(1e-14));
  CHECK(half[5] > 0.0);

  const Jet6 shifted = rhs(P, {0.0, {0.5, 1, 2, 3, 4, 5}});
  CHECK(shifted[0] == 1);
  CHECK(shifted[4] == 5);
  CHECK(shifted[5] == doctest::Approx(P.K4 * 4 - P.K2 * 2 + P.K0 * 0.5 - P.cn * std::pow(0.5, 13)).epsilon(1e-14));

  CHECK_THROWS_AS(rhs(P, {0.0, {0.0, 0, 0, 0, 0, 0}}), DomainError);
  CHECK_THROWS_AS(rhs(P, {0.0, {-0.1, 0, 0, 0, 0, 0}}), DomainError);
  // The linear equation has no positivity constraint.
  CHECK_NOTHROW(CylinderOde(P, 0.0)({-1.0, 0, 0, 0, 0, 0}));
}

TEST_CASE("bubble jet oracle") {
  const DimensionParams P = make_params(7);
  const Jet6 j = bubble_jet(P, 0.0);
  const double want[6] = {1, 0, -0.5, 0, 1.75, 0};
  for (int k = 0; k < 6; ++k) CHECK(j[k] == doctest::Approx(want[k]).epsilon(1e-15).scale(1.0));
  CHECK(pow(cosh(TaylorSeries::variable(0.0, 6)), -0.5).to_jet()[6] == doctest::Approx(-139.0 / 8).epsilon(1e-14));
}

TEST_CASE("the cylinder solution is an equilibrium") {
  const DimensionParams P = make_params(7);
  const Trajectory tr = integrate(P, {0.0, {P.eps_star, 0, 0, 0, 0, 0}}, 50.0);
  CHECK(tr.status() == IntegrationStatus::Completed);
  CHECK(tr.t_end() == 50.0);
  for (double t = 0; t <= 50; t += 0.37) CHECK(std::abs(tr.jet_at(t)[0] - P.eps_star) < 1e-10);
}

TEST_CASE("bubble trajectory matches the closed form") {
  // Unstable rates grow with n, so the window shrinks.
  for (auto [n, t_end] : {std::pair{7, 4.0}, std::pair{9, 3.0}}) {
    const DimensionParams P = make_params(n);
    IntegrateOptions opt;
    opt.tol = {1e-15, 1e-13};
    const Trajectory tr = integrate(P, {0.0, bubble_jet(P, 0.0)}, t_end, opt);
    REQUIRE(tr.status() == IntegrationStatus::Completed);
    double worst = 0;
    for (double t = 0; t <= t_end; t += 0.01) worst = std::max(worst, std::abs(tr.jet_at(t)[0] - std::pow(std::cosh(t), -P.gamma)));
    CAPTURE(n);
    CHECK(worst < 1e-8);
  }
}

// The bubble is a homoclinic orbit of a hyperbolic equilibrium at 0; errors
// grow like exp((n+2)t/2) along the unstable directions, so the 1e-8 band is
// lost before t = 10 and the run ends at a positivity event.
TEST_CASE("bubble trajectory matches the closed form on [0, 10]" * doctest::may_fail()) {
  const DimensionParams P = make_params(7);
  const Trajectory tr = integrate(P, {0.0, bubble_jet(P, 0.0)}, 10.0);
  CHECK(tr.status() == IntegrationStatus::Completed);
  double worst = 0;
  for (double t = 0; t <= tr.t_end(); t += 0.01) worst = std::max(worst, std::abs(tr.jet_at(t)[0] - std::pow(std::cosh(t), -0.5)));
  CHECK(worst < 1e-8);
}

TEST_CASE("error decreases with the tolerance") {
  const DimensionParams P = make_params(7);
  double prev = 0;
  for (double rel : {1e-7, 1e-9, 1e-11}) {
    IntegrateOptions opt;
    opt.tol = {rel * 1e-2, rel};
    const Trajectory tr = integrate(P, {0.0, bubble_jet(P, 0.0)}, 2.0, opt);
    const double err = std::abs(tr.jet_at(2.0)[0] - std::pow(std::cosh(2.0), -0.5));
    CAPTURE(rel);
    if (prev > 0) CHECK(err < prev / 20);
    prev = err;
  }
}

TEST_CASE("large initial slope ends with a reported status, not NaN") {
  const DimensionParams P = make_params(7);
  for (double slope : {50.0, -50.0, 1e4}) {
    const Trajectory tr = integrate(P, {0.0, {0.5, slope, 0, 0, 0, 0}}, 100.0);
    CAPTURE(slope);
    CHECK(tr.status() != IntegrationStatus::Completed);
    for (const CylState& s : tr.nodes()) {
      for (double x : s.jet) CHECK(std::isfinite(x));
      CHECK(s.jet[0] > 0.0);
    }
  }
}

TEST_CASE("invalid integration input") {
  const DimensionParams P = make_params(7);
  CHECK_THROWS_AS(integrate(P, {0.0, {-1.0, 0, 0, 0, 0, 0}}, 1.0), DomainError);
  IntegrateOptions bad;
  bad.tol = {0.0, -1.0};
  CHECK_THROWS_AS(integrate(P, {0.0, {0.5, 0, 0, 0, 0, 0}}, 1.0, bad), DomainError);
}

TEST_CASE("dense output reproduces nodes and stays continuous") {
  const DimensionParams P = make_params(7);
  const Trajectory tr = integrate(P, {0.0, bubble_jet(P, 0.0)}, 2.0);
  const auto nodes = tr.nodes();
  REQUIRE(nodes.size() > 3);
  for (std::size_t i = 1; i + 1 < nodes.size(); ++i) {
    const Jet6 at = tr.jet_at(nodes[i].t);
    for (int k = 0; k < 6; ++k) CHECK(at[k] == nodes[i].jet[k]);
    const Jet6 before = tr.jet_at(nodes[i].t - 1e-9);
    for (int k = 0; k < 6; ++k) CHECK(std::abs(before[k] - nodes[i].jet[k]) < 1e-6);
  }
  CHECK_THROWS_AS(tr.jet_at(2.5), DomainError);
  CHECK(tr.derivative_at(1.0, 6) == doctest::Approx(CylinderOde(P).sixth(tr.jet_at(1.0))).epsilon(1e-14));
}

TEST_CASE("time reversal symmetry") {
  const DimensionParams P = make_params(7);
  const Jet6 start = {0.7, 0, 0.1, 0, -0.1, 0};
  IntegrateOptions opt;
  opt.tol = {1e-14, 1e-12};
  const Trajectory fwd = integrate(P, {0.0, start}, 2.0, opt);
  const Trajectory bwd = integrate(P, {0.0, start}, -2.0, opt);
  REQUIRE(fwd.status() == IntegrationStatus::Completed);
  REQUIRE(bwd.status() == IntegrationStatus::Completed);
  CHECK_FALSE(bwd.forward());
  for (double t = 0.1; t <= 2.0; t += 0.1) {
    const Jet6 a = fwd.jet_at(t), b = reverse(bwd.jet_at(-t));
    for (int k = 0; k < 6; ++k) CHECK(std::abs(a[k] - b[k]) < 1e-9 * (1 + std::abs(a[k])));
  }
}

TEST_CASE("events") {
  const DimensionParams P = make_params(7);
  IntegrateOptions opt;
  opt.tol = {1e-15, 1e-13};

  SUBCASE("bubble has one critical point") {
    const Trajectory tr = integrate(P, {-2.0, bubble_jet(P, -2.0)}, 2.0, opt);
    REQUIRE(tr.status() == IntegrationStatus::Completed);
    const EventResult e = find_event(tr, {});
    REQUIRE(e.times.size() == 1);
    CHECK(std::abs(e.times[0]) < 1e-12);
    CHECK(find_event(tr, {EventKind::VMax, {}, {}, {}}).times.size() == 1);
    CHECK(find_event(tr, {EventKind::VMin, {}, {}, {}}).times.empty());
  }

  SUBCASE("constant solution is degenerate") {
    const Trajectory tr = integrate(P, {0.0, {P.eps_star, 0, 0, 0, 0, 0}}, 5.0);
    const EventResult e = find_event(tr, {});
    CHECK(e.degenerate);
    CHECK(e.times.empty());
  }

  SUBCASE("custom scalar") {
    const Trajectory tr = integrate(P, {-2.0, bubble_jet(P, -2.0)}, 2.0, opt);
    EventSpec level;
    level.kind = EventKind::Custom;
    level.scalar = [](const CylState& s) { return s.jet[0] - 0.9; };
    const EventResult e = find_event(tr, level);
    REQUIRE(e.times.size() == 2);
    CHECK(std::pow(std::cosh(e.times[1]), -0.5) == doctest::Approx(0.9).epsilon(1e-10));
    CHECK(e.times[0] == doctest::Approx(-e.times[1]).epsilon(1e-9));
  }

  SUBCASE("Delaunay orbit has one minimum and one maximum per period") {
    const DelaunayOrbit orbit = find_orbit(P, 0.8 * P.eps_star);
    const OrbitExtension ext = orbit_trajectory(P, orbit, 2);
    EventSpec spec;
    spec.from = 0.5;
    spec.to = 0.5 + orbit.period;
    const EventResult e = find_event(ext.trajectory, spec);
    REQUIRE(e.times.size() == 2);
    CHECK(e.times[0] == doctest::Approx(orbit.half_time).epsilon(1e-9));
    CHECK(e.times[1] == doctest::Approx(orbit.period).epsilon(1e-9));
    spec.kind = EventKind::VMin;
    const EventResult mins = find_event(ext.trajectory, spec);
    REQUIRE(mins.times.size() == 1);
    CHECK(mins.times[0] == doctest::Approx(orbit.period).epsilon(1e-9));
  }
}

TEST_CASE("terminal event stops the integration") {
  const DimensionParams P = make_params(7);
  IntegrateOptions opt;
  opt.stop_on = [](const CylState& s) { return s.jet[1]; };
  opt.stop_after = 0.1;
  const Trajectory tr = integrate(P, {-1.0, bubble_jet(P, -1.0)}, 5.0, opt);
  REQUIRE(tr.status() == IntegrationStatus::TerminalEvent);
  REQUIRE(tr.event_time().has_value());
  CHECK(std::abs(*tr.event_time()) < 1e-9);
  CHECK(tr.t_end() == *tr.event_time());
}

TEST_CASE("trajectory append") {
  const DimensionParams P = make_params(7);
  Trajectory a = integrate(P, {0.0, bubble_jet(P, 0.0)}, 1.0);
  const Trajectory b = integrate(P, {1.0, a.nodes().back().jet}, 2.0);
  const std::size_t na = a.size();
  CHECK(a.append(b) == 0.0);
  CHECK(a.size() == na + b.size() - 1);
  CHECK(a.t_end() == 2.0);
  CHECK(std::abs(a.jet_at(1.5)[0] - b.jet_at(1.5)[0]) == 0.0);
}
