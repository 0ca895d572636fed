#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "qcurv/dimension.hpp"

namespace qcurv {

/// (v, v', v'', v''', v'''', v''''') at one cylinder time.
using Jet6 = std::array<double, 6>;

struct CylState {
  double t = 0;
  Jet6 jet{};
};

/// Absolute/relative local error tolerances.
struct Tolerances {
  double abs = 1e-12;
  double rel = 1e-10;
};

/// Right-hand side of the cylinder ODE
///   v^(6) = K4 v^(4) - K2 v^(2) + K0 v - A v^p,
/// written as a first-order system in the jet. `A` defaults to cn.
///
/// The nonlinear term is evaluated as (A/cn) K0 v (v/eps*)^(p-1), equal to
/// A v^p, so the constant solution is an exact fixed point in floating point.
class CylinderOde {
 public:
  explicit CylinderOde(const DimensionParams& params);
  CylinderOde(const DimensionParams& params, double A);

  const DimensionParams& params() const { return params_; }
  double coefficient() const { return A_; }
  bool linear() const { return A_ == 0.0; }

  /// Sixth derivative from the jet. Throws DomainError when v <= 0 and A != 0.
  double sixth(const Jet6& y) const;
  Jet6 operator()(const Jet6& y) const;

 private:
  DimensionParams params_;
  double A_;
  double kappa_;  // A / cn * K0
};

/// Derivative of the state, (v', ..., v^(6)), with A = cn.
Jet6 rhs(const DimensionParams& params, const CylState& state);

enum class IntegrationStatus {
  Completed,        ///< reached t_end
  TerminalEvent,    ///< stopped at a root of IntegrateOptions::stop_on
  PositivityEvent,  ///< v dropped to zero; the trajectory ends at the last positive state
  StepUnderflow,    ///< step size fell below resolution
  BlowUp,           ///< state exceeded the blow-up bound or became non-finite
  MaxSteps,
};

std::string_view to_string(IntegrationStatus status);

struct IntegrationStats {
  std::size_t steps = 0;
  std::size_t rejected = 0;
  std::size_t rhs_evaluations = 0;
};

struct IntegrateOptions {
  Tolerances tol{};
  std::optional<double> coefficient;  ///< A in the nonlinear term; cn when empty
  std::size_t max_steps = 200000;
  double blowup = 1e10;
  double initial_step = 0;  ///< 0 picks a starting step automatically
  double max_step = 0;      ///< 0 means unbounded
  /// Terminal event: integration stops at the first sign change of this
  /// scalar after time `stop_after` (measured from the start, in the
  /// direction of integration).
  std::function<double(const CylState&)> stop_on;
  double stop_after = 0;
};

/// Integrator output: accepted nodes plus dense output between them.
///
/// The state at an interior time t is one Dormand-Prince step from the
/// preceding node to t. All six jet components keep the local accuracy of
/// the method (a polynomial in v through the node jets loses the high
/// derivatives to cancellation on short steps), and the next node is
/// reproduced exactly.
class Trajectory {
 public:
  Trajectory() = default;

  std::span<const CylState> nodes() const { return nodes_; }
  std::size_t size() const { return nodes_.size(); }
  bool empty() const { return nodes_.empty(); }
  double t_begin() const { return nodes_.front().t; }
  double t_end() const { return nodes_.back().t; }
  bool forward() const { return nodes_.size() < 2 || nodes_.back().t > nodes_.front().t; }

  /// Dense jet at t (must lie within the trajectory's span).
  Jet6 jet_at(double t) const;
  CylState state_at(double t) const { return {t, jet_at(t)}; }
  /// k-th derivative of v at t, 0 <= k <= 6.
  double derivative_at(double t, int k) const;

  IntegrationStatus status() const { return status_; }
  const IntegrationStats& stats() const { return stats_; }
  /// Time of the terminal event when status() == TerminalEvent.
  std::optional<double> event_time() const { return event_time_; }
  /// Coefficient A of the nonlinear term the trajectory was integrated with.
  double coefficient() const { return ode_ ? ode_->coefficient() : 0.0; }

  /// Concatenates `next`, which must start where this trajectory ends (same
  /// direction and same equation). Returns the jump between this
  /// trajectory's last node and the first node of `next`.
  double append(const Trajectory& next);

  // Construction interface used by the integrator.
  void set_ode(const CylinderOde& ode) { ode_ = ode; }
  void push_node(const CylState& state);
  void set_status(IntegrationStatus status) { status_ = status; }
  void set_event_time(double t) { event_time_ = t; }
  IntegrationStats& mutable_stats() { return stats_; }

 private:
  std::size_t locate(double t) const;

  std::optional<CylinderOde> ode_;
  std::vector<CylState> nodes_;
  IntegrationStats stats_{};
  IntegrationStatus status_ = IntegrationStatus::Completed;
  std::optional<double> event_time_;
};

/// Adaptive Dormand-Prince 5(4) integration of the cylinder ODE from
/// `initial` to `t_end` (which may lie before initial.t).
/// Throws DomainError on invalid input; numerical breakdowns are reported
/// through Trajectory::status().
Trajectory integrate(const DimensionParams& params, const CylState& initial, double t_end,
                     const IntegrateOptions& options = {});

enum class EventKind { V1Zero, VMin, VMax, Custom };

struct EventSpec {
  EventKind kind = EventKind::V1Zero;
  std::function<double(const CylState&)> scalar;  ///< used when kind == Custom
  std::optional<double> from;  ///< restrict to times >= from
  std::optional<double> to;    ///< restrict to times <= to
};

struct EventResult {
  std::vector<double> times;  ///< increasing
  /// The scalar never exceeded 1e-14 in magnitude on the searched range, so
  /// no sign structure exists (e.g. v' along the constant solution).
  bool degenerate = false;
};

/// Sign-change roots of the event scalar along the dense output, refined by
/// bracketing to 1e-12 in t. VMin/VMax keep only the v' roots where v'
/// changes sign upward/downward.
EventResult find_event(const Trajectory& trajectory, const EventSpec& event);

/// Time-reversal t -> -t acting on a jet: odd derivatives change sign.
Jet6 reverse(const Jet6& jet);

}  // namespace qcurv
