#include "pmc/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pmc/diagnostics.hpp"

namespace pmc {

Regime predict(const Problem& problem) {
  const auto& nl = problem.nonlinearity;
  const double a = std::abs(problem.xi);
  if (a == 0.0) return Regime::Constant;
  if (nl.alpha_is_finite()) {
    if (a == nl.alpha) return Regime::Constant;
    if (a > nl.alpha) return Regime::MonotoneDivergence;
  }
  if (problem.sign == CurvatureSign::Lorentz)
    return problem.dimension == 1 ? Regime::PeriodicOscillating
                                  : Regime::LocalizedOscillating;

  // Euclidean, 0 < a < alpha: the G(xi) vs 1 dichotomy. A closed-form G is
  // trusted down to rounding width; quadrature-computed G cannot resolve
  // the boundary below its own tolerance.
  const double d = primitive(nl, a) - 1.0;
  const bool closed = nl.has_closed_form();
  const double band = closed ? 1e-14 : 1e-12;
  if (problem.dimension == 1) {
    if (d > band) return Regime::GradientBlowup;
    if (d < -band) return Regime::PeriodicOscillating;
    // Inside the band the queried height is the threshold itself up to
    // rounding; with a closed form that is the G = 1 blow-up case.
    return closed ? Regime::GradientBlowup : Regime::TheoryBoundary;
  }
  // N >= 2: G <= 1 is covered by theory (localized), beyond is open.
  return d <= band ? Regime::LocalizedOscillating : Regime::OutsideTheory;
}

std::pair<Regime, Evidence> observe(const Trajectory& traj) {
  Evidence ev;
  ev.termination = traj.termination;
  ev.decayed = traj.decayed;
  ev.sup_norm = traj.sup_norm;
  ev.zero_count = traj.count(EventKind::Zero);
  ev.critical_count = traj.count(EventKind::CriticalPoint);

  const double xi = traj.problem.xi;
  const double abs_tol = traj.controls.abs_tol;

  double max_dev_from_xi = 0.0;
  bool monotone = true;
  double prev_abs_u = std::abs(traj.samples.front().u);
  for (const State& s : traj.samples) {
    ev.gradient_sup = std::max(ev.gradient_sup, std::abs(s.up));
    max_dev_from_xi = std::max(max_dev_from_xi, std::abs(s.u - xi));
    const double au = std::abs(s.u);
    if (au < prev_abs_u - 1e-9 * std::max(1.0, prev_abs_u)) monotone = false;
    prev_abs_u = std::max(prev_abs_u, au);
  }
  const double final_abs_u = std::abs(traj.samples.back().u);
  ev.monotone_growth =
      monotone && final_abs_u > std::abs(xi) + std::max(1e-6, 0.01 * std::abs(xi));

  const auto zeros = traj.event_radii(EventKind::Zero);
  if (zeros.size() >= 3) {
    double gmin = std::numeric_limits<double>::infinity(), gmax = 0.0,
           gsum = 0.0;
    for (size_t i = 1; i < zeros.size(); ++i) {
      const double gap = zeros[i] - zeros[i - 1];
      gmin = std::min(gmin, gap);
      gmax = std::max(gmax, gap);
      gsum += gap;
    }
    const double gmean = gsum / (zeros.size() - 1);
    ev.period = 2.0 * gmean;
    ev.period_spread = (gmax - gmin) / gmean;
  }

  if (traj.problem.dimension >= 2 && ev.critical_count >= 2) {
    const EnvelopeReport env = extrema_envelope(traj);
    ev.envelope_first = env.extrema.front().second;
    ev.envelope_tail = env.tail;
    ev.envelope_strictly_decreasing = env.strictly_decreasing;
  }

  // Constant solution: nothing but the termination marker, and u pinned
  // at xi to within tolerance noise.
  if (traj.events.size() == 1 && max_dev_from_xi <= 1e3 * abs_tol)
    return {Regime::Constant, ev};

  switch (traj.termination) {
    case TerminationCause::GradientBlowup:
      if (ev.zero_count == 0 && ev.monotone_growth)
        return {Regime::MonotoneDivergence, ev};
      return {Regime::GradientBlowup, ev};
    case TerminationCause::HeightDivergence:
      if (ev.zero_count == 0) return {Regime::MonotoneDivergence, ev};
      ev.note = "height divergence after interior zeros";
      return {Regime::OutsideTheory, ev};
    case TerminationCause::LightConeApproach:
      if (ev.zero_count == 0 && ev.monotone_growth)
        return {Regime::MonotoneDivergence, ev};
      // A bounded Lorentz orbit must keep |u'| uniformly away from 1, so
      // this is a numerical anomaly, not a regime.
      ev.anomaly = true;
      ev.note = "light-cone approach with bounded height";
      return {Regime::GradientBlowup, ev};
    case TerminationCause::HorizonReached:
    case TerminationCause::EventBudgetExhausted:
      break;
  }

  if (ev.zero_count >= 6) {
    if (traj.problem.dimension == 1) {
      if (ev.period && ev.period_spread <= 1e-6)
        return {Regime::PeriodicOscillating, ev};
      ev.note = "zero spacings not stable to 1e-6";
      return {Regime::OutsideTheory, ev};
    }
    // N >= 2: a strictly shrinking envelope that has measurably decayed.
    // Radial decay is algebraic (~ r^{-(N-1)/2}), so besides the decayed
    // flag and an absolute tail threshold, halving of the envelope counts
    // as decay evidence at feasible horizons.
    if (ev.envelope_strictly_decreasing &&
        (ev.decayed || ev.envelope_tail < 1e-4 ||
         ev.envelope_tail <= 0.5 * ev.envelope_first))
      return {Regime::LocalizedOscillating, ev};
    ev.note = "oscillation without conclusive envelope decay";
    return {Regime::OutsideTheory, ev};
  }

  ev.note = "too few zeros for an oscillatory call";
  return {Regime::OutsideTheory, ev};
}

bool regimes_agree(Regime predicted, Regime observed, CurvatureSign sign,
                   const Evidence& evidence) {
  if (predicted == Regime::TheoryBoundary ||
      predicted == Regime::OutsideTheory)
    return true;  // vacuous: the observation stands alone
  if (predicted == observed) return true;
  // Euclidean divergence above alpha can surface as height growth or as
  // gradient growth; a blow-up without interior zeros counts as agreement.
  if (predicted == Regime::MonotoneDivergence &&
      observed == Regime::GradientBlowup &&
      sign == CurvatureSign::Euclidean && evidence.zero_count == 0)
    return true;
  return false;
}

ClassificationReport classify(const Problem& problem,
                              const IntegrationControls& controls) {
  ClassificationReport rep;
  rep.predicted = predict(problem);
  const Trajectory traj = integrate(problem, controls);
  auto [observed, ev] = observe(traj);
  rep.observed = observed;
  rep.evidence = std::move(ev);
  rep.agree = regimes_agree(rep.predicted, rep.observed, problem.sign,
                            rep.evidence);
  return rep;
}

}  // namespace pmc
