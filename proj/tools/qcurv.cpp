// qcurv: batch front end for the radial sixth-order Q-curvature toolkit.
//
// Exit codes: 0 ok, 1 verification failure, 2 usage or domain error,
// 3 numerical non-convergence.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qcurv/csv.hpp"
#include "qcurv/curvature.hpp"
#include "qcurv/errors.hpp"
#include "qcurv/invariants.hpp"
#include "qcurv/shooting.hpp"
#include "qcurv/taylor.hpp"
#include "qcurv/transforms.hpp"

#ifndef QCURV_VERSION
#define QCURV_VERSION "unknown"
#endif

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace qcurv;

namespace {

constexpr int kOk = 0;
constexpr int kVerifyFailed = 1;
constexpr int kUsage = 2;
constexpr int kNoConvergence = 3;

struct RunConfig {
  int n = 7;
  double tol_abs = 1e-12;
  double tol_rel = 1e-10;
  double shoot_tol = 1e-9;
  int max_iter = 50;
  std::string out_dir;
  std::string format = "json";

  Tolerances tolerances() const { return {tol_abs, tol_rel}; }
  ShootingOptions shooting() const {
    ShootingOptions o;
    o.tol = shoot_tol;
    o.max_iterations = max_iter;
    return o;
  }
  ordered_json echo() const {
    return {{"n", n}, {"tol_abs", tol_abs}, {"tol_rel", tol_rel}, {"shoot_tol", shoot_tol},
            {"max_iter", max_iter}, {"out", out_dir}, {"format", format}};
  }
  void validate() const {
    if (!(tol_abs > 0) || !(tol_rel > 0) || !(shoot_tol > 0)) throw DomainError("tolerances must be positive");
    if (max_iter < 1) throw DomainError("--max-iter must be at least 1");
  }
};

// Files created by a command; removed on scope exit unless kept.
class Artifacts {
 public:
  explicit Artifacts(fs::path dir) : dir_(std::move(dir)) {}
  Artifacts(const Artifacts&) = delete;
  Artifacts& operator=(const Artifacts&) = delete;
  ~Artifacts() { discard(); }

  // Removes the files this command created, unless keep() was called.
  void discard() {
    if (keep_) return;
    std::error_code ec;
    for (const fs::path& p : created_) fs::remove(p, ec);
    created_.clear();
  }

  fs::path path(const std::string& name) const { return dir_ / name; }

  std::ofstream open(const std::string& name, bool append = false) {
    fs::create_directories(dir_);
    const fs::path p = path(name);
    const bool existed = fs::exists(p);
    std::ofstream out(p, append ? std::ios::app : std::ios::trunc);
    if (!out) throw DomainError("cannot write " + p.string());
    if (!existed) created_.push_back(p);
    if (std::find(listed_.begin(), listed_.end(), p.string()) == listed_.end()) listed_.push_back(p.string());
    return out;
  }

  void keep() { keep_ = true; }
  std::vector<std::string> existing() const {
    std::vector<std::string> out;
    for (const std::string& p : listed_) {
      if (fs::exists(p)) out.push_back(p);
    }
    return out;
  }

 private:
  fs::path dir_;
  std::vector<fs::path> created_;
  std::vector<std::string> listed_;
  bool keep_ = false;
};

void append_manifest(const fs::path& dir, const ordered_json& entry) {
  fs::create_directories(dir);
  const fs::path p = dir / "manifest.json";
  ordered_json doc = {{"schema", "qcurv-manifest/1"}, {"entries", ordered_json::array()}};
  if (fs::exists(p)) {
    std::ifstream in(p);
    try {
      ordered_json old = ordered_json::parse(in);
      if (old.is_object() && old.contains("entries") && old["entries"].is_array()) doc = std::move(old);
    } catch (const ordered_json::parse_error&) {
      // A corrupt manifest is replaced rather than extended.
    }
  }
  doc["entries"].push_back(entry);
  std::ofstream out(p, std::ios::trunc);
  out << doc.dump(2) << '\n';
}

double resolve_eps0(const DimensionParams& P, const std::optional<double>& abs, const std::optional<double>& rel) {
  if (!abs && !rel) throw DomainError("one of --eps0 or --eps0-rel is required");
  const double eps0 = abs ? *abs : *rel * P.eps_star;
  if (!(eps0 > 0.0) || eps0 > P.eps_star) {
    std::ostringstream msg;
    msg << "eps0 = " << eps0 << " is outside (0, eps*] = (0, " << P.eps_star << "]";
    throw DomainError(msg.str());
  }
  return eps0;
}

ordered_json params_json(const DimensionParams& P) {
  const FactorizationReport rep = verify_factorization(P);
  return {{"n", P.n},
          {"gamma", P.gamma},
          {"p", P.p},
          {"Qn", P.Qn},
          {"cn", P.cn},
          {"K0", P.K0},
          {"K2", P.K2},
          {"K4", P.K4},
          {"mu", {P.mu1, P.mu2, P.mu3}},
          {"J", {P.J0, P.J1, P.J2, P.J3}},
          {"L0", P.L0},
          {"eps_star", P.eps_star},
          {"omega", P.omega},
          {"identities",
           {{"exact", rep.exact},
            {"k4_defect", rep.k4_defect},
            {"k2_defect", rep.k2_defect},
            {"k0_defect", rep.k0_defect},
            {"printed_k0", rep.printed_k0},
            {"k0_over_printed", rep.k0_over_printed},
            {"eps_star_residual", rep.eps_star_residual}}}};
}

ordered_json orbit_json(const DelaunayOrbit& o) {
  return {{"n", o.n},
          {"eps0", o.eps0},
          {"eps0_rel", o.eps0 / make_params(o.n).eps_star},
          {"eps2", o.eps2},
          {"eps4", o.eps4},
          {"period", o.period},
          {"half_time", o.half_time},
          {"energy", o.energy},
          {"residual", o.residual},
          {"iterations", o.iterations},
          {"constant", o.constant},
          {"segments", o.segments()},
          {"stitch_defect", o.stitch_defect},
          {"periodicity_defect", o.periodicity_defect},
          {"trajectory_steps", o.trajectory.size()}};
}

ordered_json report_summary(const CurvatureReport& r) {
  return {{"quantity", r.quantity}, {"min", r.min}, {"r_at_min", r.r_at_min}, {"points", r.r.size()}};
}

// ---------------------------------------------------------------- commands

int cmd_params(const RunConfig& cfg, ordered_json& results) {
  const DimensionParams P = make_params(cfg.n);
  const ordered_json j = params_json(P);
  results = j;
  if (cfg.format == "csv") {
    const FactorizationReport rep = verify_factorization(P);
    std::cout << "n,gamma,p,Qn,cn,K0,K2,K4,mu1,mu2,mu3,eps_star,omega,identity_defect\n"
              << P.n << ',' << csv::format(P.gamma) << ',' << csv::format(P.p) << ',' << csv::format(P.Qn) << ','
              << csv::format(P.cn) << ',' << csv::format(P.K0) << ',' << csv::format(P.K2) << ','
              << csv::format(P.K4) << ',' << csv::format(P.mu1) << ',' << csv::format(P.mu2) << ','
              << csv::format(P.mu3) << ',' << csv::format(P.eps_star) << ',' << csv::format(P.omega) << ','
              << csv::format(rep.max_defect()) << '\n';
  } else {
    std::cout << j.dump(2) << '\n';
  }
  return kOk;
}

int cmd_orbit(const RunConfig& cfg, Artifacts& files, ordered_json& results, const std::optional<double>& eps0_abs,
              const std::optional<double>& eps0_rel) {
  const DimensionParams P = make_params(cfg.n);
  const double eps0 = resolve_eps0(P, eps0_abs, eps0_rel);
  const DelaunayOrbit orbit = find_orbit(P, eps0, std::nullopt, cfg.shooting());

  const std::string name = "orbit_n" + std::to_string(cfg.n) + "_e" + csv::format(eps0) + ".csv";
  {
    std::ofstream out = files.open(name);
    csv::write_trajectory(out, orbit.trajectory);
  }
  {
    const bool fresh = !fs::exists(files.path("orbits.csv"));
    std::ofstream table = files.open("orbits.csv", true);
    csv::write_orbit_row(table, orbit, fresh);
  }
  results = orbit_json(orbit);
  std::cout << results.dump(2) << '\n';
  return kOk;
}

int cmd_sweep(const RunConfig& cfg, Artifacts& files, ordered_json& results, std::optional<double> from,
              std::optional<double> to, std::optional<double> from_rel, std::optional<double> to_rel, int steps) {
  const DimensionParams P = make_params(cfg.n);
  if (steps < 1) throw DomainError("empty eps0 grid: --steps must be at least 1");
  const double a = from ? *from : from_rel.value_or(0.95) * P.eps_star;
  const double b = to ? *to : to_rel.value_or(0.5) * P.eps_star;
  std::vector<double> grid;
  for (int k = 0; k < steps; ++k) grid.push_back(steps == 1 ? a : a + (b - a) * k / (steps - 1));
  for (double e : grid) {
    if (!(e > 0.0) || e > P.eps_star) throw DomainError("sweep grid leaves (0, eps*]: " + csv::format(e));
  }
  if (grid.size() > 1 && !(grid.front() > grid.back())) throw DomainError("sweep grid must decrease from near eps*");

  const SweepResult sweep = continuation_sweep(P, grid, cfg.shooting());
  const PohozaevTable table = pohozaev_table(P, sweep);
  {
    std::ofstream out = files.open("pohozaev_n" + std::to_string(cfg.n) + ".csv");
    csv::write_pohozaev(out, table, cfg.n);
  }
  {
    std::ofstream out = files.open("sweep_orbits_n" + std::to_string(cfg.n) + ".csv");
    for (std::size_t i = 0; i < sweep.orbits.size(); ++i) csv::write_orbit_row(out, sweep.orbits[i], i == 0);
  }

  ordered_json pairs = ordered_json::array();
  bool monotone = true;
  for (std::size_t i = 0; i + 1 < table.p_cyl.size(); ++i) {
    const bool ok = table.p_cyl[i + 1] > table.p_cyl[i];
    monotone = monotone && ok;
    pairs.push_back({{"eps0", {table.eps0[i], table.eps0[i + 1]}}, {"p_cyl", {table.p_cyl[i], table.p_cyl[i + 1]}}, {"increasing", ok}});
  }
  results = {{"grid", grid},
             {"solved", sweep.orbits.size()},
             {"complete", sweep.complete},
             {"p_cyl_increasing", monotone},
             {"period_increasing", sweep.period_increasing},
             {"monotonicity", pairs}};
  if (sweep.failed_eps0) {
    results["failed_eps0"] = *sweep.failed_eps0;
    results["diagnostics"] = sweep.diagnostics;
  }
  std::cout << results.dump(2) << '\n';
  if (!sweep.complete) {
    files.keep();
    std::cerr << "sweep stopped at eps0 = " << csv::format(sweep.failed_eps0.value_or(0.0)) << ": " << sweep.diagnostics
              << '\n';
    return kNoConvergence;
  }
  return kOk;
}

struct Check {
  std::string name;
  double defect;
  double threshold;
  bool pass() const { return std::isfinite(defect) && defect <= threshold; }
};

int cmd_verify(const RunConfig& cfg, Artifacts& files, ordered_json& results, std::optional<double> tol) {
  const DimensionParams P = make_params(cfg.n);
  auto limit = [&](double dflt) { return tol.value_or(dflt); };
  std::vector<Check> checks;

  const FactorizationReport rep = verify_factorization(P);
  checks.push_back({"factorization", rep.max_defect(), limit(1e-12)});
  checks.push_back({"cylinder_identity", rep.eps_star_residual, limit(1e-12)});

  const auto grid = log_grid(0.1, 10.0, 200);
  checks.push_back({"tri_laplacian_spherical", tri_laplacian_residual(spherical_profile(P, grid), P).max_abs_relative(), limit(1e-10)});
  checks.push_back({"tri_laplacian_cylinder", tri_laplacian_residual(cylinder_profile(P, grid, P.eps_star), P).max_abs_relative(), limit(1e-10)});

  double drift = 0.0;
  for (double rel : {0.9, 0.7, 0.5}) {
    const DelaunayOrbit orbit = find_orbit(P, rel * P.eps_star, std::nullopt, cfg.shooting());
    const OrbitExtension ext = orbit_trajectory(P, orbit, 5, cfg.tolerances());
    drift = std::max(drift, pohozaev_cyl(P, ext.trajectory).drift);
  }
  checks.push_back({"hamiltonian_drift", drift, limit(1e-8)});

  IntegrateOptions opt;
  opt.tol = {1e-15, 1e-13};
  const auto start = pow(cosh(TaylorSeries::variable(-2.0, 6)), -P.gamma).to_jet();
  const Trajectory bubble = integrate(P, {-2.0, {start[0], start[1], start[2], start[3], start[4], start[5]}}, 2.0, opt);
  checks.push_back({"spherical_pohozaev_zero", std::abs(pohozaev_cyl(P, bubble, 2).p_cyl), limit(1e-9)});
  checks.push_back({"equator_minimal", std::abs(geodesic_sphere_mean_curvature(1.0, P.n)), limit(1e-10)});

  ordered_json list = ordered_json::array();
  bool all = true;
  for (const Check& c : checks) {
    list.push_back({{"name", c.name}, {"defect", c.defect}, {"threshold", c.threshold}, {"pass", c.pass()}});
    if (!c.pass()) {
      all = false;
      std::cerr << "verify: check '" << c.name << "' failed: defect " << csv::format(c.defect) << " > "
                << csv::format(c.threshold) << '\n';
    }
  }
  results = {{"n", P.n}, {"pass", all}, {"checks", list}};
  {
    std::ofstream out = files.open("verify_n" + std::to_string(P.n) + ".json");
    out << results.dump(2) << '\n';
  }
  files.keep();
  std::cout << results.dump(2) << '\n';
  return all ? kOk : kVerifyFailed;
}

int cmd_modica(const RunConfig& cfg, Artifacts& files, ordered_json& results, const std::string& source,
               const std::string& path, const std::optional<double>& eps0_abs, const std::optional<double>& eps0_rel,
               double phase, std::optional<double> r_min, std::optional<double> r_max, int points) {
  const DimensionParams P = make_params(cfg.n);
  RadialProfile profile;
  if (source == "spherical") {
    profile = spherical_profile(P, log_grid(r_min.value_or(0.1), r_max.value_or(10.0), points));
  } else if (source == "orbit") {
    const double eps0 = resolve_eps0(P, eps0_abs, eps0_rel);
    const DelaunayOrbit orbit = find_orbit(P, eps0, std::nullopt, cfg.shooting());
    profile = delaunay_profile(orbit, phase, log_grid(r_min.value_or(1e-3), r_max.value_or(1.0), points), P);
    results["orbit"] = orbit_json(orbit);
  } else {
    if (path.empty()) throw DomainError("--source file needs --path");
    profile = csv::read_profile(fs::path(path), P.n);
    if (!profile.has_jets(4)) throw FormatError("profile file needs jet columns u1..u4", 1);
  }

  const ModicaReport rep = modica_quantities(profile, P);
  const std::string stem = "modica_n" + std::to_string(P.n) + "_" + source;
  {
    std::ofstream out = files.open(stem + "_q2_margin.csv");
    csv::write_report(out, rep.q2_margin);
  }
  {
    std::ofstream out = files.open(stem + "_q4_margin.csv");
    csv::write_report(out, rep.q4_margin);
  }
  results["source"] = source;
  results["points"] = profile.size();
  results["q2"] = report_summary(rep.q2);
  results["q4"] = report_summary(rep.q4);
  results["q2_margin"] = report_summary(rep.q2_margin);
  results["q4_margin"] = report_summary(rep.q4_margin);
  std::cout << results.dump(2) << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Radial sixth-order constant Q-curvature: constants, Delaunay orbits, invariants, diagnostics"};
  app.set_version_flag("--version", QCURV_VERSION);
  app.require_subcommand(1);

  RunConfig cfg;
  if (const char* env = std::getenv("QCURV_OUT_DIR"); env && *env) cfg.out_dir = env;
  if (cfg.out_dir.empty()) cfg.out_dir = ".";

  app.add_option("--out", cfg.out_dir, "Output directory (default: $QCURV_OUT_DIR or .)");
  app.add_option("--tol-abs", cfg.tol_abs, "Integrator absolute tolerance");
  app.add_option("--tol-rel", cfg.tol_rel, "Integrator relative tolerance");
  app.add_option("--shoot-tol", cfg.shoot_tol, "Shooting residual tolerance");
  app.add_option("--max-iter", cfg.max_iter, "Newton iteration limit");

  auto add_n = [&](CLI::App* sub) { sub->add_option("--n", cfg.n, "Dimension (n >= 7)")->required(); };

  CLI::App* params = app.add_subcommand("params", "Print the dimension constants and identity report");
  add_n(params);
  params->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"json", "csv"}));

  std::optional<double> eps0, eps0_rel;
  CLI::App* orbit = app.add_subcommand("orbit", "Solve one Delaunay orbit");
  add_n(orbit);
  auto* o_abs = orbit->add_option("--eps0", eps0, "Necksize");
  orbit->add_option("--eps0-rel", eps0_rel, "Necksize as a multiple of eps*")->excludes(o_abs);

  std::optional<double> from, to, from_rel, to_rel;
  int steps = 10;
  CLI::App* sweep = app.add_subcommand("sweep", "Continuation sweep and Pohozaev curve");
  add_n(sweep);
  auto* s_from = sweep->add_option("--from", from, "First necksize");
  auto* s_to = sweep->add_option("--to", to, "Last necksize");
  sweep->add_option("--from-rel", from_rel, "First necksize / eps* (default 0.95)")->excludes(s_from);
  sweep->add_option("--to-rel", to_rel, "Last necksize / eps* (default 0.5)")->excludes(s_to);
  sweep->add_option("--steps", steps, "Number of grid points");

  std::optional<double> verify_tol;
  CLI::App* verify = app.add_subcommand("verify", "Consolidated verification report");
  add_n(verify);
  verify->add_option("--tol", verify_tol, "Override every check threshold");

  std::string source = "spherical", path;
  double phase = 0.0;
  std::optional<double> r_min, r_max;
  int points = 200;
  CLI::App* modica = app.add_subcommand("modica", "Modica-type margin report");
  add_n(modica);
  modica->add_option("--source", source, "Profile source")->check(CLI::IsMember({"spherical", "orbit", "file"}));
  modica->add_option("--path", path, "Profile CSV for --source file");
  auto* m_abs = modica->add_option("--eps0", eps0, "Necksize for --source orbit");
  modica->add_option("--eps0-rel", eps0_rel, "Necksize / eps* for --source orbit")->excludes(m_abs);
  modica->add_option("--phase", phase, "Phase T of the Delaunay profile");
  modica->add_option("--r-min", r_min, "Smallest grid radius");
  modica->add_option("--r-max", r_max, "Largest grid radius");
  modica->add_option("--points", points, "Grid size")->check(CLI::Range(2, 1000000));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  const auto t0 = std::chrono::steady_clock::now();
  Artifacts files{fs::path(cfg.out_dir)};
  ordered_json results = ordered_json::object();
  ordered_json config = cfg.echo();
  int code = kOk;
  std::string error;

  try {
    cfg.validate();
    if (command == "params") {
      code = cmd_params(cfg, results);
    } else if (command == "orbit") {
      config["eps0"] = eps0 ? ordered_json(*eps0) : ordered_json(nullptr);
      config["eps0_rel"] = eps0_rel ? ordered_json(*eps0_rel) : ordered_json(nullptr);
      code = cmd_orbit(cfg, files, results, eps0, eps0_rel);
    } else if (command == "sweep") {
      config["steps"] = steps;
      code = cmd_sweep(cfg, files, results, from, to, from_rel, to_rel, steps);
    } else if (command == "verify") {
      config["tol"] = verify_tol ? ordered_json(*verify_tol) : ordered_json(nullptr);
      code = cmd_verify(cfg, files, results, verify_tol);
    } else if (command == "modica") {
      config["source"] = source;
      config["points"] = points;
      code = cmd_modica(cfg, files, results, source, path, eps0, eps0_rel, phase, r_min, r_max, points);
    }
  } catch (const FormatError& e) {
    error = e.what();
    code = kUsage;
  } catch (const DomainError& e) {
    error = e.what();
    code = kUsage;
  } catch (const ConvergenceError& e) {
    std::ostringstream msg;
    msg << e.what() << " (best residual " << csv::format(e.best_residual()) << " after " << e.iterations()
        << " iterations)";
    error = msg.str();
    code = kNoConvergence;
  } catch (const NumericalError& e) {
    error = e.what();
    code = kNoConvergence;
  } catch (const std::exception& e) {
    error = e.what();
    code = kUsage;
  }
  if (!error.empty()) std::cerr << "qcurv " << command << ": " << error << '\n';
  if (code == kOk) files.keep();
  files.discard();

  ordered_json entry = {{"command", command},
                        {"config", config},
                        {"exit_code", code},
                        {"wall_time_s", std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()},
                        {"artifacts", files.existing()},
                        {"version", QCURV_VERSION},
                        {"results", results}};
  if (!error.empty()) entry["error"] = error;
  try {
    append_manifest(cfg.out_dir, entry);
  } catch (const std::exception& e) {
    std::cerr << "qcurv: cannot write manifest: " << e.what() << '\n';
  }
  return code;
}
