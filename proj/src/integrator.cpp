#include "pmc/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace pmc {
namespace {

// Dormand-Prince 5(4) tableau with its degree-4 continuous extension.
constexpr double kC2 = 1.0 / 5, kC3 = 3.0 / 10, kC4 = 4.0 / 5, kC5 = 8.0 / 9;
constexpr double kA21 = 1.0 / 5;
constexpr double kA31 = 3.0 / 40, kA32 = 9.0 / 40;
constexpr double kA41 = 44.0 / 45, kA42 = -56.0 / 15, kA43 = 32.0 / 9;
constexpr double kA51 = 19372.0 / 6561, kA52 = -25360.0 / 2187,
                 kA53 = 64448.0 / 6561, kA54 = -212.0 / 729;
constexpr double kA61 = 9017.0 / 3168, kA62 = -355.0 / 33,
                 kA63 = 46732.0 / 5247, kA64 = 49.0 / 176,
                 kA65 = -5103.0 / 18656;
constexpr double kB1 = 35.0 / 384, kB3 = 500.0 / 1113, kB4 = 125.0 / 192,
                 kB5 = -2187.0 / 6784, kB6 = 11.0 / 84;
constexpr double kE1 = 71.0 / 57600, kE3 = -71.0 / 16695, kE4 = 71.0 / 1920,
                 kE5 = -17253.0 / 339200, kE6 = 22.0 / 525, kE7 = -1.0 / 40;
constexpr double kD1 = -12715105075.0 / 11282082432.0;
constexpr double kD3 = 87487479700.0 / 32700410799.0;
constexpr double kD4 = -10690763975.0 / 1880347072.0;
constexpr double kD5 = 701980252875.0 / 199316789632.0;
constexpr double kD6 = -1453857185.0 / 822651844.0;
constexpr double kD7 = 69997945.0 / 29380423.0;

struct Vec2 {
  double u = 0.0;
  double up = 0.0;
};

inline bool finite(const Vec2& v) {
  return std::isfinite(v.u) && std::isfinite(v.up);
}

std::array<double, 5> dense_coefficients(double y0, double y1, double h,
                                         const std::array<Vec2, 7>& k,
                                         bool up_component) {
  auto comp = [up_component](const Vec2& v) {
    return up_component ? v.up : v.u;
  };
  const double ydiff = y1 - y0;
  const double bspl = h * comp(k[0]) - ydiff;
  const double c5 = h * (kD1 * comp(k[0]) + kD3 * comp(k[2]) +
                         kD4 * comp(k[3]) + kD5 * comp(k[4]) +
                         kD6 * comp(k[5]) + kD7 * comp(k[6]));
  return {y0, ydiff, bspl, ydiff - h * comp(k[6]) - bspl, c5};
}

inline double eval_dense(const std::array<double, 5>& c, double theta) {
  const double t1 = 1.0 - theta;
  return c[0] + theta * (c[1] + t1 * (c[2] + theta * (c[3] + t1 * c[4])));
}

double bisect_component(const DenseSegment& seg, double ra, double rb,
                        bool on_up, double r_tol) {
  double fa = on_up ? seg.eval_up(ra) : seg.eval_u(ra);
  while (rb - ra > r_tol) {
    const double rm = 0.5 * (ra + rb);
    if (!(rm > ra && rm < rb)) break;
    const double fm = on_up ? seg.eval_up(rm) : seg.eval_u(rm);
    if (fm == 0.0) return rm;
    if ((fa < 0.0) == (fm < 0.0)) {
      ra = rm;
      fa = fm;
    } else {
      rb = rm;
    }
  }
  return 0.5 * (ra + rb);
}

}  // namespace

double DenseSegment::eval_u(double r) const {
  return eval_dense(cu, (r - r0) / h);
}

double DenseSegment::eval_up(double r) const {
  return eval_dense(cup, (r - r0) / h);
}

State Trajectory::at(double r) const {
  if (segments.empty()) {
    if (samples.empty()) throw std::logic_error("Trajectory::at: empty");
    return samples.front();
  }
  r = std::clamp(r, segments.front().r0, segments.back().r_end());
  // last segment whose start does not exceed r
  auto it = std::upper_bound(
      segments.begin(), segments.end(), r,
      [](double value, const DenseSegment& s) { return value < s.r0; });
  if (it != segments.begin()) --it;
  return it->state_at(r);
}

int Trajectory::count(EventKind kind) const {
  int n = 0;
  for (const auto& e : events) n += (e.kind == kind);
  return n;
}

std::vector<double> Trajectory::event_radii(EventKind kind) const {
  std::vector<double> out;
  for (const auto& e : events)
    if (e.kind == kind) out.push_back(e.r);
  return out;
}

double locate_event(const DenseSegment& segment,
                    const std::function<double(const State&)>& predicate,
                    double r_tol) {
  if (!(r_tol > 0.0))
    throw std::invalid_argument("locate_event: r_tol must be positive");
  const double ra = segment.r0;
  const double rb = segment.r_end();
  const double fa = predicate(segment.state_at(ra));
  const double fb = predicate(segment.state_at(rb));
  if (fa == 0.0) return ra;
  if (fb == 0.0) return rb;
  if ((fa < 0.0) == (fb < 0.0))
    throw std::invalid_argument(
        "locate_event: predicate does not change sign across the segment");
  double lo = ra, hi = rb, flo = fa;
  while (hi - lo > r_tol) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    const double fm = predicate(segment.state_at(mid));
    if (fm == 0.0) return mid;
    if ((flo < 0.0) == (fm < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

Trajectory integrate(const Problem& problem,
                     const IntegrationControls& controls_in) {
  if (problem.dimension < 1)
    throw std::invalid_argument("integrate: dimension must be >= 1");
  if (!std::isfinite(problem.xi))
    throw std::invalid_argument("integrate: xi must be finite");
  if (!problem.nonlinearity.g)
    throw std::invalid_argument("integrate: nonlinearity.g is empty");

  IntegrationControls ctl = controls_in;
  if (!(ctl.rel_tol > 0.0) || !(ctl.abs_tol > 0.0))
    throw std::invalid_argument("integrate: tolerances must be positive");
  if (!(ctl.lorentz_margin > 0.0) || !(ctl.lorentz_margin < 1.0))
    throw std::invalid_argument("integrate: lorentz_margin must be in (0,1)");
  if (!(ctl.r_max > ctl.origin_delta))
    throw std::invalid_argument("integrate: r_max must exceed origin_delta");
  if (ctl.max_events < 1)
    throw std::invalid_argument("integrate: max_events must be positive");
  if (!(ctl.event_r_tol > 0.0))
    throw std::invalid_argument("integrate: event_r_tol must be positive");

  const double alpha_eff = std::min(problem.nonlinearity.alpha, 10.0);
  if (!ctl.u_divergence_threshold)
    ctl.u_divergence_threshold = std::max(
        {1e6, 100.0 * std::abs(problem.xi), 100.0 * alpha_eff});
  const double u_div = *ctl.u_divergence_threshold;

  Trajectory traj;
  traj.problem = problem;
  traj.controls = ctl;

  const bool lorentz = problem.sign == CurvatureSign::Lorentz;
  const State start = origin_start(problem, ctl.origin_delta);
  double r = start.r;
  Vec2 y{start.u, start.up};

  auto deriv = [&problem](double rr, const Vec2& yy, Vec2& out) {
    Slope s;
    if (!try_rhs(problem, State{rr, yy.u, yy.up}, s)) return false;
    out = {s.du, s.dup};
    return true;
  };

  Vec2 k1;
  if (!deriv(r, y, k1))
    throw IntegrationStalled("integrate: rhs not evaluable at origin start",
                             std::move(traj));

  traj.samples.push_back({r, y.u, y.up});
  traj.sup_norm = std::abs(y.u);

  // Noise gates: an event is recorded only if the relevant component
  // exceeded 1e3 * abs_tol since the previous event of the same kind.
  const double gate = 1e3 * ctl.abs_tol;
  double peak_u = std::abs(y.u);
  double peak_up = std::abs(y.up);
  int small_extrema_run = 0;

  double h = 0.5 * ctl.origin_delta;
  bool rejected_since_accept = false;
  double up_prev_accept = std::abs(y.up);

  std::optional<TerminationCause> cause;
  Event term_event;

  constexpr long kMaxSteps = 20'000'000;
  long steps = 0;
  while (!cause) {
    if (++steps > kMaxSteps)
      throw IntegrationStalled(
          "integrate: step budget exhausted at r = " + std::to_string(r),
          std::move(traj));

    bool clipped = false;
    if (h >= ctl.r_max - r) {
      h = ctl.r_max - r;
      clipped = true;
    }

    // One embedded RK5(4) attempt. Stage 7 doubles as the FSAL slope at
    // the trial endpoint.
    std::array<Vec2, 7> k;
    k[0] = k1;
    Vec2 y1{};
    bool stage_ok = true;
    {
      Vec2 ys{y.u + h * kA21 * k[0].u, y.up + h * kA21 * k[0].up};
      stage_ok = deriv(r + kC2 * h, ys, k[1]);
      if (stage_ok) {
        ys = {y.u + h * (kA31 * k[0].u + kA32 * k[1].u),
              y.up + h * (kA31 * k[0].up + kA32 * k[1].up)};
        stage_ok = deriv(r + kC3 * h, ys, k[2]);
      }
      if (stage_ok) {
        ys = {y.u + h * (kA41 * k[0].u + kA42 * k[1].u + kA43 * k[2].u),
              y.up + h * (kA41 * k[0].up + kA42 * k[1].up + kA43 * k[2].up)};
        stage_ok = deriv(r + kC4 * h, ys, k[3]);
      }
      if (stage_ok) {
        ys = {y.u + h * (kA51 * k[0].u + kA52 * k[1].u + kA53 * k[2].u +
                         kA54 * k[3].u),
              y.up + h * (kA51 * k[0].up + kA52 * k[1].up + kA53 * k[2].up +
                          kA54 * k[3].up)};
        stage_ok = deriv(r + kC5 * h, ys, k[4]);
      }
      if (stage_ok) {
        ys = {y.u + h * (kA61 * k[0].u + kA62 * k[1].u + kA63 * k[2].u +
                         kA64 * k[3].u + kA65 * k[4].u),
              y.up + h * (kA61 * k[0].up + kA62 * k[1].up + kA63 * k[2].up +
                          kA64 * k[3].up + kA65 * k[4].up)};
        stage_ok = deriv(r + h, ys, k[5]);
      }
      if (stage_ok) {
        y1 = {y.u + h * (kB1 * k[0].u + kB3 * k[2].u + kB4 * k[3].u +
                         kB5 * k[4].u + kB6 * k[5].u),
              y.up + h * (kB1 * k[0].up + kB3 * k[2].up + kB4 * k[3].up +
                          kB5 * k[4].up + kB6 * k[5].up)};
        stage_ok = finite(y1) && deriv(r + h, y1, k[6]);
      }
    }

    bool reject = false;
    bool domain_reject = false;
    double err_pus = 0.0;
    if (!stage_ok) {
      reject = true;
      domain_reject = true;
    } else if (lorentz && std::abs(y1.up) >= 1.0 - ctl.lorentz_margin) {
      reject = true;
      domain_reject = true;
    } else {
      const double eu = h * (kE1 * k[0].u + kE3 * k[2].u + kE4 * k[3].u +
                             kE5 * k[4].u + kE6 * k[5].u + kE7 * k[6].u);
      const double eup = h * (kE1 * k[0].up + kE3 * k[2].up + kE4 * k[3].up +
                              kE5 * k[4].up + kE6 * k[5].up + kE7 * k[6].up);
      const double mu = std::max(std::abs(y.u), std::abs(y1.u));
      const double mv = std::max(std::abs(y.up), std::abs(y1.up));
      // Error per unit step keeps the accumulated error proportional to the
      // tolerance as it tightens. The rounding floor stops the h-denominator
      // from punishing steps whose estimate is pure arithmetic noise, which
      // otherwise locks the stepper out of the steep pre-blow-up region.
      constexpr double kRound = 16.0 * std::numeric_limits<double>::epsilon();
      const double du_ = std::max(h * (ctl.abs_tol + ctl.rel_tol * mu),
                                  kRound * std::max(mu, ctl.abs_tol));
      const double dv_ = std::max(h * (ctl.abs_tol + ctl.rel_tol * mv),
                                  kRound * std::max(mv, ctl.abs_tol));
      const double ru = eu / du_, rv = eup / dv_;
      err_pus = std::sqrt(0.5 * (ru * ru + rv * rv));
      if (!std::isfinite(err_pus)) {
        reject = true;
        domain_reject = true;
      } else {
        reject = err_pus > 1.0;
      }
    }

    if (reject) {
      const double shrink =
          domain_reject ? 0.5
                        : std::clamp(0.9 * std::pow(err_pus, -0.25), 0.2, 0.9);
      h *= shrink;
      rejected_since_accept = true;
      if (h < 1e-15 * std::max(r, 1.0)) {
        if (lorentz && domain_reject &&
            1.0 - std::abs(y.up) <= 1e4 * ctl.lorentz_margin) {
          // Persistent approach to the light cone: u'' -> 0 there, so the
          // reported r extrapolates the remaining gap at the current slope.
          const double slope = std::abs(k1.up);
          const double r_ext =
              r + (slope > 0.0 ? (1.0 - std::abs(y.up)) / slope : 0.0);
          cause = TerminationCause::LightConeApproach;
          term_event = {EventKind::Termination, r_ext, y.u, y.up, cause};
        } else if (!lorentz && std::abs(y.up) >= 1e4 &&
                   std::abs(y.up) > up_prev_accept) {
          // The gradient is climbing past the resolvable range: for a
          // generic energy cap |u'| ~ (R - r)^{-1/2}, so the radius where
          // it would cross a large threshold sits below double resolution.
          // Underflow under this pressure IS the blow-up signature; r of
          // the last accepted step approximates R from below.
          cause = TerminationCause::GradientBlowup;
          term_event = {EventKind::Termination, r, y.u, y.up, cause};
        } else {
          throw IntegrationStalled(
              "integrate: step size underflow at r = " + std::to_string(r),
              std::move(traj));
        }
      }
      continue;
    }

    // ---- accepted ----------------------------------------------------
    const double r1 = clipped ? ctl.r_max : r + h;
    DenseSegment seg;
    seg.r0 = r;
    seg.h = r1 - r;
    seg.cu = dense_coefficients(y.u, y1.u, h, k, false);
    seg.cup = dense_coefficients(y.up, y1.up, h, k, true);

    // Scan the step for sign changes of u and u' on the interpolant.
    constexpr int kScan = 8;
    double sr[kScan + 1], su_[kScan + 1], sup_[kScan + 1];
    for (int i = 0; i <= kScan; ++i) {
      sr[i] = (i == 0) ? r : (i == kScan ? r1 : r + seg.h * i / kScan);
      su_[i] = (i == 0) ? y.u : (i == kScan ? y1.u : seg.eval_u(sr[i]));
      sup_[i] = (i == 0) ? y.up : (i == kScan ? y1.up : seg.eval_up(sr[i]));
    }

    struct Candidate {
      double r;
      EventKind kind;
    };
    std::vector<Candidate> cands;
    for (int i = 1; i <= kScan; ++i) {
      peak_u = std::max(peak_u, std::abs(su_[i]));
      peak_up = std::max(peak_up, std::abs(sup_[i]));
      if (su_[i - 1] * su_[i] < 0.0)
        cands.push_back({bisect_component(seg, sr[i - 1], sr[i], false,
                                          ctl.event_r_tol),
                         EventKind::Zero});
      if (sup_[i - 1] * sup_[i] < 0.0)
        cands.push_back({bisect_component(seg, sr[i - 1], sr[i], true,
                                          ctl.event_r_tol),
                         EventKind::CriticalPoint});
    }
    std::sort(cands.begin(), cands.end(),
              [](const Candidate& a, const Candidate& b) { return a.r < b.r; });

    for (const Candidate& c : cands) {
      const bool is_zero = c.kind == EventKind::Zero;
      double& peak = is_zero ? peak_u : peak_up;
      if (peak <= gate) continue;
      if (static_cast<int>(traj.events.size()) >= ctl.max_events) {
        cause = TerminationCause::EventBudgetExhausted;
        term_event = {EventKind::Termination, r1, y1.u, y1.up, cause};
        break;
      }
      double re = c.r;
      const double floor_r =
          std::max(traj.samples.back().r,
                   traj.events.empty() ? 0.0 : traj.events.back().r);
      if (re <= floor_r) re = std::nextafter(floor_r, r1);
      if (re >= r1) continue;  // no representable slot left inside the step
      const double ue = seg.eval_u(re);
      const double upe = seg.eval_up(re);
      traj.events.push_back({c.kind, re, ue, upe, std::nullopt});
      traj.samples.push_back({re, ue, upe});
      traj.sup_norm = std::max(traj.sup_norm, std::abs(ue));
      peak = is_zero ? std::abs(ue) : std::abs(upe);
      if (!is_zero) {
        if (std::abs(ue) < 1e-10) {
          if (++small_extrema_run >= 3 && problem.dimension >= 2) {
            // Localized orbit has decayed; stop early.
            cause = TerminationCause::HorizonReached;
            traj.decayed = true;
            term_event = {EventKind::Termination, r1, y1.u, y1.up, cause};
            break;
          }
        } else {
          small_extrema_run = 0;
        }
      }
    }

    traj.segments.push_back(seg);
    if (r1 > traj.samples.back().r) traj.samples.push_back({r1, y1.u, y1.up});
    traj.sup_norm = std::max(traj.sup_norm, std::abs(y1.u));

    up_prev_accept = std::abs(y.up);
    r = r1;
    y = y1;
    k1 = k[6];

    if (!cause) {
      if (lorentz && std::abs(y.up) >= 1.0 - 2.0 * ctl.lorentz_margin) {
        // The rejection guard sits at 1 - margin; an accepted state this
        // close to the cone means the orbit is marching into it. Report
        // the gap extrapolated at the current slope.
        const double slope = std::abs(k1.up);
        const double r_ext =
            r + (slope > 0.0 ? (1.0 - std::abs(y.up)) / slope : 0.0);
        cause = TerminationCause::LightConeApproach;
        term_event = {EventKind::Termination, r_ext, y.u, y.up, cause};
      } else if (!lorentz && std::abs(y.up) > ctl.up_blowup_threshold) {
        cause = TerminationCause::GradientBlowup;
        term_event = {EventKind::Termination, r, y.u, y.up, cause};
      } else if (std::abs(y.u) > u_div) {
        cause = TerminationCause::HeightDivergence;
        term_event = {EventKind::Termination, r, y.u, y.up, cause};
      } else if (r >= ctl.r_max) {
        cause = TerminationCause::HorizonReached;
        term_event = {EventKind::Termination, r, y.u, y.up, cause};
      }
    }

    double fac = 0.9 * std::pow(std::max(err_pus, 1e-10), -0.25);
    fac = std::clamp(fac, 0.2, rejected_since_accept ? 1.0 : 5.0);
    h *= fac;
    rejected_since_accept = false;
  }

  traj.termination = *cause;
  traj.events.push_back(term_event);
  return traj;
}

}  // namespace pmc
