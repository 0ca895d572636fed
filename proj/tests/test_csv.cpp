#include <doctest.h>

#include <sstream>

#include "qcurv/csv.hpp"
#include "qcurv/errors.hpp"

using namespace qcurv;

TEST_CASE("number formatting round-trips") {
  CHECK(csv::format(0.1) == "0.10000000000000001");
  CHECK(csv::format(26.75) == "26.75");
  CHECK(csv::format(-3.0) == "-3");
  const double x = 0.8725695321584247723;
  CHECK(std::stod(csv::format(x)) == x);
}

TEST_CASE("profile round trip") {
  const DimensionParams P = make_params(7);
  const RadialProfile u = spherical_profile(P, log_grid(0.1, 10.0, 17));
  std::ostringstream out;
  csv::write_profile(out, u);
  const std::string text = out.str();
  CHECK(text.rfind("r,u,u1,u2,u3,u4,u5,u6\n", 0) == 0);
  CHECK(text.find('\r') == std::string::npos);
  std::istringstream in(text);
  const RadialProfile back = csv::read_profile(in, 7);
  REQUIRE(back.size() == u.size());
  CHECK(back.order == 6);
  for (std::size_t i = 0; i < u.size(); ++i) {
    CHECK(back.r[i] == u.r[i]);
    CHECK(back.u[i] == u.u[i]);
    for (int k = 0; k <= 6; ++k) CHECK(back.jets[i][k] == u.jets[i][k]);
  }
}

TEST_CASE("profile without jets") {
  std::istringstream in("r,u\n0.5,2\n1,1.5\n");
  const RadialProfile p = csv::read_profile(in, 7);
  CHECK(p.size() == 2);
  CHECK_FALSE(p.has_jets());
  std::istringstream partial("r,u,u1,u2\n1,1,0.1,0.2\n");
  const RadialProfile q = csv::read_profile(partial, 7);
  CHECK(q.order == 2);
  CHECK(q.jets[0][2] == 0.2);
}

TEST_CASE("malformed profiles name the line") {
  auto line_of = [](const std::string& text) -> std::size_t {
    std::istringstream in(text);
    try {
      csv::read_profile(in, 7);
    } catch (const FormatError& e) {
      return e.line();
    }
    return 0;
  };
  CHECK(line_of("radius,u\n1,1\n") == 1);
  CHECK(line_of("r,u,u2\n1,1,1\n") == 1);
  CHECK(line_of("r,u\n1,1\n2,abc\n") == 3);
  CHECK(line_of("r,u\n1,1\n2\n") == 3);
  CHECK(line_of("r,u\n1,1\n0.5,1\n") == 3);
  CHECK(line_of("r,u\n1,-1\n") == 2);
  CHECK(line_of("") == 1);
  CHECK(line_of("r,u\n") == 1);
  std::istringstream bad("r,u\n1,x\n");
  CHECK_THROWS_WITH_AS(csv::read_profile(bad, 7), doctest::Contains("line 2"), FormatError);
}

TEST_CASE("table headers") {
  const DimensionParams P = make_params(7);
  std::ostringstream traj, orbit, curve, report;
  const DelaunayOrbit o = find_orbit(P, P.eps_star);
  csv::write_trajectory(traj, o.trajectory);
  CHECK(traj.str().rfind("t,v,v1,v2,v3,v4,v5\n", 0) == 0);
  csv::write_orbit_row(orbit, o, true);
  CHECK(orbit.str().rfind("n,eps0,eps2,eps4,period,energy,residual\n7,", 0) == 0);
  PohozaevTable table;
  table.eps0 = {o.eps0};
  table.p_cyl = {-341.0};
  table.orbits = {o};
  csv::write_pohozaev(curve, table, 7);
  CHECK(curve.str().rfind("n,eps0,h_rad,p_cyl,period\n7,", 0) == 0);
  CurvatureReport rep;
  rep.r = {1.0};
  rep.value = {2.0};
  csv::write_report(report, rep);
  CHECK(report.str() == "r,value\n1,2\n");
}
