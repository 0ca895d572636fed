#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>

#include "qcurv/curvature.hpp"
#include "qcurv/integrator.hpp"
#include "qcurv/invariants.hpp"
#include "qcurv/shooting.hpp"
#include "qcurv/transforms.hpp"

namespace qcurv::csv {

/// Shortest round-tripping decimal form ("%.17g").
std::string format(double x);

/// `r,u[,u1,...,u<order>]`.
void write_profile(std::ostream& out, const RadialProfile& profile);
/// `t,v,v1,v2,v3,v4,v5`, one row per accepted node.
void write_trajectory(std::ostream& out, const Trajectory& trajectory);
/// `n,eps0,eps2,eps4,period,energy,residual`; the header only if `header`.
void write_orbit_row(std::ostream& out, const DelaunayOrbit& orbit, bool header);
/// `n,eps0,h_rad,p_cyl,period`.
void write_pohozaev(std::ostream& out, const PohozaevTable& table, int n);
/// `r,value`.
void write_report(std::ostream& out, const CurvatureReport& report);

/// Parses the profile format. Jet columns must be a contiguous prefix of
/// u1..u6. Throws FormatError carrying the 1-based line number.
RadialProfile read_profile(std::istream& in, int n);
RadialProfile read_profile(const std::filesystem::path& path, int n);

}  // namespace qcurv::csv
