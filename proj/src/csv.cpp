#include "qcurv/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "qcurv/errors.hpp"

namespace qcurv::csv {
namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_number(const std::string& field, std::size_t line) {
  const std::string s = trim(field);
  double x = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw FormatError("not a number: '" + s + "'", line);
  }
  return x;
}

}  // namespace

std::string format(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_profile(std::ostream& out, const RadialProfile& profile) {
  const int order = profile.has_jets(1) ? std::min(profile.order, 6) : 0;
  out << "r,u";
  for (int k = 1; k <= order; ++k) out << ",u" << k;
  out << '\n';
  for (std::size_t i = 0; i < profile.size(); ++i) {
    out << format(profile.r[i]) << ',' << format(profile.u[i]);
    for (int k = 1; k <= order; ++k) out << ',' << format(profile.jets[i][k]);
    out << '\n';
  }
}

void write_trajectory(std::ostream& out, const Trajectory& trajectory) {
  out << "t,v,v1,v2,v3,v4,v5\n";
  for (const CylState& s : trajectory.nodes()) {
    out << format(s.t);
    for (double x : s.jet) out << ',' << format(x);
    out << '\n';
  }
}

void write_orbit_row(std::ostream& out, const DelaunayOrbit& orbit, bool header) {
  if (header) out << "n,eps0,eps2,eps4,period,energy,residual\n";
  out << orbit.n << ',' << format(orbit.eps0) << ',' << format(orbit.eps2) << ',' << format(orbit.eps4) << ','
      << format(orbit.period) << ',' << format(orbit.energy) << ',' << format(orbit.residual) << '\n';
}

void write_pohozaev(std::ostream& out, const PohozaevTable& table, int n) {
  const double omega = sphere_area(n - 1);
  out << "n,eps0,h_rad,p_cyl,period\n";
  for (std::size_t i = 0; i < table.eps0.size(); ++i) {
    out << n << ',' << format(table.eps0[i]) << ',' << format(table.p_cyl[i] / omega) << ','
        << format(table.p_cyl[i]) << ',' << format(table.orbits[i].period) << '\n';
  }
}

void write_report(std::ostream& out, const CurvatureReport& report) {
  out << "r,value\n";
  for (std::size_t i = 0; i < report.r.size(); ++i) out << format(report.r[i]) << ',' << format(report.value[i]) << '\n';
}

RadialProfile read_profile(std::istream& in, int n) {
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) throw FormatError("empty profile file", 1);
  ++lineno;
  const auto header = split(trim(line));
  if (header.size() < 2 || trim(header[0]) != "r" || trim(header[1]) != "u") {
    throw FormatError("profile header must start with 'r,u'", lineno);
  }
  const int order = static_cast<int>(header.size()) - 2;
  if (order > 6) throw FormatError("at most six jet columns u1..u6", lineno);
  for (int k = 1; k <= order; ++k) {
    if (trim(header[k + 1]) != "u" + std::to_string(k)) {
      throw FormatError("expected column 'u" + std::to_string(k) + "'", lineno);
    }
  }

  RadialProfile profile;
  profile.n = n;
  profile.order = order > 0 ? order : -1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto fields = split(line);
    if (fields.size() != header.size()) {
      throw FormatError("expected " + std::to_string(header.size()) + " fields, got " + std::to_string(fields.size()),
                        lineno);
    }
    const double r = parse_number(fields[0], lineno);
    const double u = parse_number(fields[1], lineno);
    if (!(r > 0.0)) throw FormatError("radius must be positive", lineno);
    if (!(u > 0.0)) throw FormatError("u must be positive", lineno);
    if (!profile.r.empty() && !(r > profile.r.back())) throw FormatError("radii must increase", lineno);
    profile.r.push_back(r);
    profile.u.push_back(u);
    if (order > 0) {
      Jet7 jet{};
      jet[0] = u;
      for (int k = 1; k <= order; ++k) jet[k] = parse_number(fields[k + 1], lineno);
      profile.jets.push_back(jet);
    }
  }
  if (profile.r.empty()) throw FormatError("profile has no rows", lineno);
  return profile;
}

RadialProfile read_profile(const std::filesystem::path& path, int n) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open profile file " + path.string());
  return read_profile(in, n);
}

}  // namespace qcurv::csv
