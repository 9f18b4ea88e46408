#pragma once

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

#include "pmc/dynamics.hpp"

namespace pmc {

struct IntegrationControls {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double r_max = 1e3;
  int max_events = 1000;
  double up_blowup_threshold = 1e8;   // Euclidean gradient blow-up
  double lorentz_margin = 1e-10;      // terminate when 1 - |u'| < margin
  /// Height divergence threshold; nullopt resolves to
  /// max(1e6, 100 |xi|, 100 alpha_eff) with alpha_eff = min(alpha, 10).
  std::optional<double> u_divergence_threshold;
  double event_r_tol = 1e-12;         // bisection width for event location
  double origin_delta = 1e-6;         // Taylor start radius
};

enum class EventKind { Zero, CriticalPoint, Termination };

enum class TerminationCause {
  GradientBlowup,
  LightConeApproach,
  HeightDivergence,
  HorizonReached,
  EventBudgetExhausted,
};

struct Event {
  EventKind kind = EventKind::Termination;
  double r = 0.0;
  double u = 0.0;
  double up = 0.0;
  std::optional<TerminationCause> cause;  // set iff kind == Termination
};

/// Dense output of one accepted step: a degree-4 polynomial in the step
/// fraction theta = (r - r0)/h, per state component.
struct DenseSegment {
  double r0 = 0.0;
  double h = 0.0;
  std::array<double, 5> cu{};   // coefficients for u
  std::array<double, 5> cup{};  // coefficients for u'

  double r_end() const { return r0 + h; }
  double eval_u(double r) const;
  double eval_up(double r) const;
  State state_at(double r) const { return {r, eval_u(r), eval_up(r)}; }
};

struct Trajectory {
  Problem problem;
  IntegrationControls controls;  // effective controls (thresholds resolved)
  std::vector<State> samples;    // strictly increasing r, first at origin delta
  std::vector<Event> events;     // strictly increasing r, termination last
  std::vector<DenseSegment> segments;
  double sup_norm = 0.0;
  bool decayed = false;  // localized early stop fired
  TerminationCause termination = TerminationCause::HorizonReached;

  /// Dense-output evaluation; r is clamped to the covered range.
  State at(double r) const;
  int count(EventKind kind) const;
  std::vector<double> event_radii(EventKind kind) const;
};

/// Raised when the step size underflows without constraint progress; the
/// partial trajectory (without a termination event) rides along.
class IntegrationStalled : public std::runtime_error {
 public:
  IntegrationStalled(const std::string& what, Trajectory partial)
      : std::runtime_error(what),
        partial_(std::make_shared<Trajectory>(std::move(partial))) {}
  const Trajectory& partial() const { return *partial_; }

 private:
  std::shared_ptr<Trajectory> partial_;
};

/// Adaptive embedded Runge-Kutta 5(4) integration from the regularized
/// origin start until a termination cause fires. Zeros of u and of u' are
/// localized on the dense output to width controls.event_r_tol and recorded
/// in order; the termination event is always present and last.
Trajectory integrate(const Problem& problem,
                     const IntegrationControls& controls = {});

/// Bisection on the dense-output interpolant for a predicate with opposite
/// signs at the segment ends. Throws std::invalid_argument when the
/// precondition fails.
double locate_event(const DenseSegment& segment,
                    const std::function<double(const State&)>& predicate,
                    double r_tol);

}  // namespace pmc
