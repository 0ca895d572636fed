#include "qcurv/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <boost/math/tools/toms748_solve.hpp>

#include "qcurv/errors.hpp"

namespace qcurv {
namespace {

constexpr int kDim = 6;

// Dormand-Prince 5(4) tableau.
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
// 5th-order minus embedded 4th-order weights.
constexpr double e1 = b1 - 5179.0 / 57600, e3 = b3 - 7571.0 / 16695, e4 = b4 - 393.0 / 640,
                 e5 = b5 - -92097.0 / 339200, e6 = b6 - 187.0 / 2100, e7 = -1.0 / 40;

constexpr int kEventSamples = 8;

Jet6 combine(const Jet6& y, double h, std::initializer_list<std::pair<double, const Jet6*>> terms) {
  Jet6 out = y;
  for (const auto& [coef, k] : terms) {
    for (int i = 0; i < kDim; ++i) out[i] += h * coef * (*k)[i];
  }
  return out;
}

bool finite_and_bounded(const Jet6& y, double bound) {
  return std::all_of(y.begin(), y.end(), [bound](double x) { return std::isfinite(x) && std::abs(x) <= bound; });
}

double error_norm(const Jet6& err, const Jet6& y0, const Jet6& y1, const Tolerances& tol) {
  double acc = 0.0;
  for (int i = 0; i < kDim; ++i) {
    const double scale = tol.abs + tol.rel * std::max(std::abs(y0[i]), std::abs(y1[i]));
    const double r = err[i] / scale;
    acc += r * r;
  }
  return std::sqrt(acc / kDim);
}

struct Step {
  bool ok = false;  // false: a stage left the domain (v <= 0) or overflowed
  Jet6 y{};
  Jet6 k7{};  // derivative at the new point (first stage of the next step)
  Jet6 err{};
  int evaluations = 0;
};

Step dopri_step(const CylinderOde& ode, const Jet6& y, const Jet6& k1, double h) {
  Step s;
  Jet6 k2, k3, k4, k5, k6;
  auto stage = [&](const Jet6& ys, Jet6& k) {
    if (!finite_and_bounded(ys, std::numeric_limits<double>::max())) return false;
    if (!ode.linear() && !(ys[0] > 0.0)) return false;
    k = ode(ys);
    ++s.evaluations;
    return true;
  };
  if (!stage(combine(y, h, {{a21, &k1}}), k2)) return s;
  if (!stage(combine(y, h, {{a31, &k1}, {a32, &k2}}), k3)) return s;
  if (!stage(combine(y, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}}), k4)) return s;
  if (!stage(combine(y, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}), k5)) return s;
  if (!stage(combine(y, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}), k6)) return s;
  s.y = combine(y, h, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
  if (!stage(s.y, s.k7)) return s;
  for (int i = 0; i < kDim; ++i) {
    s.err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * s.k7[i]);
  }
  s.ok = true;
  return s;
}

// Bracketed root refinement, 1e-12 in t or better.
double refine_root(const std::function<double(double)>& g, double a, double b, double ga, double gb) {
  if (a > b) {
    std::swap(a, b);
    std::swap(ga, gb);
  }
  auto tol = [](double x, double y) {
    return std::abs(y - x) <= std::max(1e-13, 8 * std::numeric_limits<double>::epsilon() * std::abs(x));
  };
  std::uintmax_t max_iter = 200;
  const auto [lo, hi] = boost::math::tools::toms748_solve(g, a, b, ga, gb, tol, max_iter);
  return 0.5 * (lo + hi);
}

}  // namespace

CylinderOde::CylinderOde(const DimensionParams& params) : CylinderOde(params, params.cn) {}

CylinderOde::CylinderOde(const DimensionParams& params, double A)
    : params_(params), A_(A), kappa_(A / params.cn * params.K0) {
  if (params.n < 7) throw DomainError("cylinder ODE requires n >= 7");
}

double CylinderOde::sixth(const Jet6& y) const {
  const double v = y[0];
  double nonlinear = 0.0;
  if (A_ != 0.0) {
    if (!(v > 0.0)) throw DomainError("cylinder ODE evaluated at v <= 0");
    nonlinear = kappa_ * v * std::pow(v / params_.eps_star, params_.p - 1.0);
  }
  return params_.K4 * y[4] - params_.K2 * y[2] + (params_.K0 * v - nonlinear);
}

Jet6 CylinderOde::operator()(const Jet6& y) const {
  return {y[1], y[2], y[3], y[4], y[5], sixth(y)};
}

Jet6 rhs(const DimensionParams& params, const CylState& state) { return CylinderOde(params)(state.jet); }

std::string_view to_string(IntegrationStatus status) {
  switch (status) {
    case IntegrationStatus::Completed: return "completed";
    case IntegrationStatus::TerminalEvent: return "terminal-event";
    case IntegrationStatus::PositivityEvent: return "positivity-event";
    case IntegrationStatus::StepUnderflow: return "step-underflow";
    case IntegrationStatus::BlowUp: return "blow-up";
    case IntegrationStatus::MaxSteps: return "max-steps";
  }
  return "unknown";
}

Jet6 reverse(const Jet6& jet) {
  Jet6 out = jet;
  for (int i = 1; i < kDim; i += 2) out[i] = -out[i];
  return out;
}

// ---------------------------------------------------------------- Trajectory

void Trajectory::push_node(const CylState& state) {
  if (!nodes_.empty() && state.t == nodes_.back().t) throw NumericalError("trajectory nodes must have distinct times");
  nodes_.push_back(state);
}

std::size_t Trajectory::locate(double t) const {
  if (nodes_.size() < 2) throw DomainError("trajectory has no steps to evaluate");
  const bool fwd = forward();
  const double lo = fwd ? t_begin() : t_end();
  const double hi = fwd ? t_end() : t_begin();
  const double slack = 1e-12 * std::max(1.0, std::abs(hi - lo));
  if (!(t >= lo - slack && t <= hi + slack)) {
    throw DomainError("time " + std::to_string(t) + " outside trajectory span [" + std::to_string(lo) + ", " +
                      std::to_string(hi) + "]");
  }
  // First node strictly past t in the direction of integration.
  auto it = fwd ? std::upper_bound(nodes_.begin(), nodes_.end(), t,
                                   [](double x, const CylState& s) { return x < s.t; })
                : std::upper_bound(nodes_.begin(), nodes_.end(), t,
                                   [](double x, const CylState& s) { return x > s.t; });
  std::size_t k = static_cast<std::size_t>(it - nodes_.begin());
  k = std::clamp<std::size_t>(k, 1, nodes_.size() - 1);
  return k - 1;
}

Jet6 Trajectory::jet_at(double t) const {
  if (nodes_.size() == 1 && t == nodes_.front().t) return nodes_.front().jet;
  const std::size_t step = locate(t);
  const CylState& a = nodes_[step];
  if (t == a.t) return a.jet;
  if (t == nodes_[step + 1].t) return nodes_[step + 1].jet;
  if (!ode_) throw NumericalError("trajectory carries no equation for dense output");
  const Step s = dopri_step(*ode_, a.jet, (*ode_)(a.jet), t - a.t);
  if (!s.ok) throw NumericalError("dense output left the domain of the equation");
  return s.y;
}

double Trajectory::derivative_at(double t, int k) const {
  if (k < 0 || k > 6) throw DomainError("derivative order must be in [0, 6]");
  const Jet6 jet = jet_at(t);
  if (k < 6) return jet[k];
  if (!ode_) throw NumericalError("trajectory carries no equation");
  return ode_->sixth(jet);
}

double Trajectory::append(const Trajectory& next) {
  if (next.empty()) return 0.0;
  if (empty()) {
    *this = next;
    return 0.0;
  }
  const double t_join = t_end();
  if (std::abs(next.t_begin() - t_join) > 1e-12 * std::max(1.0, std::abs(t_join))) {
    throw DomainError("appended trajectory must start where the previous one ends");
  }
  if (next.size() >= 2 && size() >= 2 && next.forward() != forward()) {
    throw DomainError("appended trajectory runs in the opposite direction");
  }
  if (ode_ && next.ode_ && ode_->coefficient() != next.ode_->coefficient()) {
    throw DomainError("appended trajectory solves a different equation");
  }
  if (!ode_) ode_ = next.ode_;
  double jump = 0.0;
  for (int i = 0; i < kDim; ++i) jump = std::max(jump, std::abs(next.nodes_.front().jet[i] - nodes_.back().jet[i]));
  // The joining node is taken from `next`, so its first step starts where it did.
  nodes_.back() = next.nodes_.front();
  nodes_.back().t = t_join;
  nodes_.insert(nodes_.end(), next.nodes_.begin() + 1, next.nodes_.end());
  stats_.steps += next.stats_.steps;
  stats_.rejected += next.stats_.rejected;
  stats_.rhs_evaluations += next.stats_.rhs_evaluations;
  status_ = next.status_;
  event_time_ = next.event_time_;
  return jump;
}

// ---------------------------------------------------------------- integrate

Trajectory integrate(const DimensionParams& params, const CylState& initial, double t_end,
                     const IntegrateOptions& options) {
  if (!(options.tol.abs > 0.0) || !(options.tol.rel > 0.0)) {
    throw DomainError("integration tolerances must be positive");
  }
  if (!std::isfinite(t_end) || !std::isfinite(initial.t)) throw DomainError("integration times must be finite");
  for (double x : initial.jet) {
    if (!std::isfinite(x)) throw DomainError("initial state must be finite");
  }
  const CylinderOde ode(params, options.coefficient.value_or(params.cn));
  if (!ode.linear() && !(initial.jet[0] > 0.0)) throw DomainError("initial state must have v > 0");

  Trajectory traj;
  traj.set_ode(ode);
  IntegrationStats& stats = traj.mutable_stats();

  double t = initial.t;
  Jet6 y = initial.jet;
  Jet6 k1 = ode(y);
  ++stats.rhs_evaluations;
  traj.push_node({t, y});
  if (t_end == t) return traj;

  const double dir = t_end > t ? 1.0 : -1.0;
  const double span = std::abs(t_end - t);
  const double h_max = options.max_step > 0 ? std::min(options.max_step, span) : span;

  // Starting step (Hairer, Norsett & Wanner, II.4).
  double h = options.initial_step;
  if (h <= 0.0) {
    const Jet6 zero{};
    const double d0 = error_norm(y, zero, zero, options.tol);
    const double d1 = error_norm(k1, zero, zero, options.tol);
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min(h0, h_max);
    const Jet6 y1 = combine(y, dir * h0, {{1.0, &k1}});
    double h1 = h0;
    if (ode.linear() || y1[0] > 0.0) {
      const Jet6 f1 = ode(y1);
      ++stats.rhs_evaluations;
      Jet6 df{};
      for (int i = 0; i < kDim; ++i) df[i] = (f1[i] - k1[i]) / h0;
      const double d2 = error_norm(df, zero, zero, options.tol);
      const double dmax = std::max(d1, d2);
      h1 = dmax <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dmax, 1.0 / 5.0);
    }
    h = std::min(100 * h0, h1);
  }
  h = std::min(std::abs(h), h_max);

  const double event_start = initial.t + dir * options.stop_after;
  bool positivity_rejected = false;

  while (true) {
    if (stats.steps >= options.max_steps) {
      traj.set_status(IntegrationStatus::MaxSteps);
      return traj;
    }
    const double remaining = std::abs(t_end - t);
    bool last = false;
    if (h >= remaining) {
      h = remaining;
      last = true;
    }
    const double min_step = 16 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t));
    if (h < min_step) {
      traj.set_status(positivity_rejected ? IntegrationStatus::PositivityEvent : IntegrationStatus::StepUnderflow);
      return traj;
    }
    const double t_new = last ? t_end : t + dir * h;
    const Step s = dopri_step(ode, y, k1, t_new - t);
    stats.rhs_evaluations += static_cast<std::size_t>(s.evaluations);
    if (!s.ok) {
      positivity_rejected = true;
      ++stats.rejected;
      h *= 0.25;
      continue;
    }
    const double en = error_norm(s.err, y, s.y, options.tol);
    if (!std::isfinite(en)) {
      ++stats.rejected;
      h *= 0.25;
      continue;
    }
    if (en > 1.0) {
      ++stats.rejected;
      h *= std::max(0.2, 0.9 * std::pow(en, -0.2));
      continue;
    }

    ++stats.steps;
    positivity_rejected = false;
    if (!finite_and_bounded(s.y, options.blowup)) {
      traj.set_status(IntegrationStatus::BlowUp);
      return traj;
    }
    if (options.stop_on && dir * (t_new - event_start) > 0.0) {
      // Scan the new step, clipped to the exclusion window, for a sign change;
      // the trajectory then ends exactly at the root.
      const double a = dir * (t - event_start) > 0.0 ? t : event_start;
      auto state = [&](double x) -> CylState {
        if (x == t_new) return {t_new, s.y};
        if (x == t) return {t, y};
        return {x, dopri_step(ode, y, k1, x - t).y};
      };
      auto g = [&](double x) { return options.stop_on(state(x)); };
      double ta = a;
      double ga = g(a);
      for (int j = 1; j <= kEventSamples; ++j) {
        const double tb = j == kEventSamples ? t_new : a + (t_new - a) * j / kEventSamples;
        const double gb = g(tb);
        if ((gb == 0.0 && ga != 0.0) || (ga < 0.0 && gb > 0.0) || (ga > 0.0 && gb < 0.0)) {
          const double te = gb == 0.0 ? tb : refine_root(g, ta, tb, ga, gb);
          if (te != t) traj.push_node(state(te));
          traj.set_event_time(te);
          traj.set_status(IntegrationStatus::TerminalEvent);
          return traj;
        }
        ta = tb;
        ga = gb;
      }
    }
    traj.push_node({t_new, s.y});

    t = t_new;
    y = s.y;
    k1 = s.k7;
    if (last) {
      traj.set_status(IntegrationStatus::Completed);
      return traj;
    }
    const double factor = std::clamp(0.9 * std::pow(std::max(en, 1e-10), -0.2), 0.2, 10.0);
    h = std::min(h * factor, h_max);
  }
}

// ---------------------------------------------------------------- events

EventResult find_event(const Trajectory& trajectory, const EventSpec& event) {
  EventResult result;
  if (trajectory.size() < 2) {
    result.degenerate = true;
    return result;
  }
  if (event.kind == EventKind::Custom && !event.scalar) throw DomainError("custom event needs a scalar");

  auto scalar = [&](double t) {
    const Jet6 jet = trajectory.jet_at(t);
    return event.kind == EventKind::Custom ? event.scalar({t, jet}) : jet[1];
  };

  const double lo_span = std::min(trajectory.t_begin(), trajectory.t_end());
  const double hi_span = std::max(trajectory.t_begin(), trajectory.t_end());
  const double lo = std::max(lo_span, event.from.value_or(lo_span));
  const double hi = std::min(hi_span, event.to.value_or(hi_span));
  if (!(hi > lo)) return result;

  // Each step inside [lo, hi] is sampled at kEventSamples sub-intervals.
  std::vector<double> knots{lo};
  for (const CylState& s : trajectory.nodes()) {
    if (s.t > lo && s.t < hi) knots.push_back(s.t);
  }
  knots.push_back(hi);
  std::sort(knots.begin(), knots.end());
  std::vector<double> grid;
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    for (int j = 0; j < kEventSamples; ++j) grid.push_back(knots[i] + (knots[i + 1] - knots[i]) * j / kEventSamples);
  }
  grid.push_back(hi);

  std::vector<double> values(grid.size());
  double amplitude = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    values[i] = scalar(grid[i]);
    amplitude = std::max(amplitude, std::abs(values[i]));
  }
  if (amplitude < 1e-14) {
    result.degenerate = true;
    return result;
  }

  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double ga = values[i], gb = values[i + 1];
    double root;
    int direction;
    if (ga == 0.0) {
      if (i == 0 || values[i - 1] * gb >= 0.0) continue;  // touching zero is not a crossing
      root = grid[i];
      direction = gb > 0.0 ? 1 : -1;
    } else if ((ga < 0.0 && gb > 0.0) || (ga > 0.0 && gb < 0.0)) {
      root = refine_root(scalar, grid[i], grid[i + 1], ga, gb);
      direction = gb > 0.0 ? 1 : -1;
    } else {
      continue;
    }
    if (event.kind == EventKind::VMin && direction < 0) continue;
    if (event.kind == EventKind::VMax && direction > 0) continue;
    result.times.push_back(root);
  }
  return result;
}

}  // namespace qcurv
