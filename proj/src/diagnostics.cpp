#include "pmc/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace pmc {

double h_plus(double t) {
  const double t2 = t * t;
  const double q = std::sqrt(1.0 + t2);
  return t2 / (q * (q + 1.0));
}

double h_minus(double t) {
  const double t2 = t * t;
  if (t2 >= 1.0) throw std::domain_error("h_minus: |t| must be < 1");
  const double q = std::sqrt(1.0 - t2);
  return t2 / (q * (q + 1.0));
}

double h_plus_inverse(double s) {
  if (!(s >= 0.0) || s >= 1.0)
    throw std::domain_error("h_plus_inverse: s must be in [0, 1)");
  return std::sqrt(s * (2.0 - s)) / (1.0 - s);
}

double h_minus_inverse(double s) {
  if (!(s >= 0.0)) throw std::domain_error("h_minus_inverse: s must be >= 0");
  return std::sqrt(s * (2.0 + s)) / (1.0 + s);
}

namespace {

double energy_h(CurvatureSign sign, double up) {
  return sign == CurvatureSign::Euclidean ? h_plus(up) : h_minus(up);
}

}  // namespace

EnergyReport energy_identity_residual(const Trajectory& trajectory) {
  if (trajectory.problem.dimension != 1)
    throw std::invalid_argument(
        "energy_identity_residual: requires dimension 1");
  const auto& nl = trajectory.problem.nonlinearity;
  const double g_xi = primitive(nl, trajectory.problem.xi);
  EnergyReport rep;
  double worst = 0.0;
  for (const State& s : trajectory.samples) {
    rep.gradient_sup = std::max(rep.gradient_sup, std::abs(s.up));
    const double lhs = energy_h(trajectory.problem.sign, s.up);
    const double rhs = g_xi - primitive(nl, s.u);
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  rep.max_identity_residual = worst;
  return rep;
}

EnergyReport lyapunov_profile(const Trajectory& trajectory) {
  if (trajectory.problem.dimension < 2)
    throw std::invalid_argument("lyapunov_profile: requires dimension >= 2");
  const auto& nl = trajectory.problem.nonlinearity;
  EnergyReport rep;
  rep.z_values.reserve(trajectory.samples.size());
  double uptick = -std::numeric_limits<double>::infinity();
  double prev = 0.0;
  bool have_prev = false;
  for (const State& s : trajectory.samples) {
    rep.gradient_sup = std::max(rep.gradient_sup, std::abs(s.up));
    const double z =
        energy_h(trajectory.problem.sign, s.up) + primitive(nl, s.u);
    rep.z_values.emplace_back(s.r, z);
    if (have_prev) uptick = std::max(uptick, z - prev);
    prev = z;
    have_prev = true;
  }
  rep.max_z_uptick = uptick;
  return rep;
}

double full_energy_residual(const Trajectory& trajectory) {
  const int n = trajectory.problem.dimension;
  if (n < 2)
    throw std::invalid_argument("full_energy_residual: requires dimension >= 2");
  const auto& nl = trajectory.problem.nonlinearity;
  const auto sign = trajectory.problem.sign;
  const double g_xi = primitive(nl, trajectory.problem.xi);
  const double s_fac = sign == CurvatureSign::Euclidean ? 1.0 : -1.0;

  // Kronrod-15 panel per dense segment (same order family as the stepper).
  static const double xk[8] = {
      0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
      0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
      0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
      0.207784955007898467600689403773245, 0.0};
  static const double wk[8] = {
      0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
      0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
      0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
      0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

  auto integrand = [&](const DenseSegment& seg, double r) {
    const double up = seg.eval_up(r);
    return up * up / (r * std::sqrt(1.0 + s_fac * up * up));
  };

  // Taylor seed for [0, delta]: u' ~ -g(xi) s / N there.
  const double delta = trajectory.controls.origin_delta;
  const double gxi = nl.g(trajectory.problem.xi);
  double dissipation = (gxi / n) * (gxi / n) * delta * delta / 2.0;

  double worst = 0.0;
  for (const DenseSegment& seg : trajectory.segments) {
    const double mid = seg.r0 + 0.5 * seg.h;
    const double half = 0.5 * seg.h;
    double acc = wk[7] * integrand(seg, mid);
    for (int j = 0; j < 7; ++j) {
      const double dx = half * xk[j];
      acc += wk[j] * (integrand(seg, mid - dx) + integrand(seg, mid + dx));
    }
    dissipation += acc * half;
    const State end = seg.state_at(seg.r_end());
    const double lhs = energy_h(sign, end.up) + (n - 1) * dissipation;
    const double rhs = g_xi - primitive(nl, end.u);
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

SymmetryReport symmetry_check(const Trajectory& trajectory) {
  if (trajectory.problem.dimension != 1)
    throw std::invalid_argument("symmetry_check: requires dimension 1");

  SymmetryReport rep;
  const auto crits = trajectory.event_radii(EventKind::CriticalPoint);
  const auto zeros = trajectory.event_radii(EventKind::Zero);
  if (crits.empty() || zeros.empty() || trajectory.segments.empty())
    return rep;  // inconclusive

  const double r_lo = trajectory.segments.front().r0;
  const double r_hi = trajectory.segments.back().r_end();
  const double rc = crits.front();
  const double rz = zeros.front();
  const double wc = std::min(rc - r_lo, r_hi - rc);
  const double wz = std::min(rz - r_lo, r_hi - rz);
  if (wc <= 16.0 * trajectory.controls.origin_delta ||
      wz <= 16.0 * trajectory.controls.origin_delta)
    return rep;  // window too small to say anything

  constexpr int kGrid = 64;
  double mirror = 0.0, anti = 0.0;
  for (int j = 1; j <= kGrid; ++j) {
    const double sc = wc * j / kGrid;
    mirror = std::max(mirror, std::abs(trajectory.at(rc + sc).u -
                                       trajectory.at(rc - sc).u));
    const double sz = wz * j / kGrid;
    anti = std::max(anti, std::abs(trajectory.at(rz + sz).u +
                                   trajectory.at(rz - sz).u));
  }
  rep.conclusive = true;
  rep.critical_r = rc;
  rep.zero_r = rz;
  rep.mirror_residual = mirror;
  rep.antisymmetry_residual = anti;
  return rep;
}

EnvelopeReport extrema_envelope(const Trajectory& trajectory) {
  if (trajectory.problem.dimension < 2)
    throw std::invalid_argument(
        "extrema_envelope: envelope strictness is an N >= 2 claim");
  EnvelopeReport rep;
  for (const Event& e : trajectory.events)
    if (e.kind == EventKind::CriticalPoint)
      rep.extrema.emplace_back(e.r, std::abs(e.u));
  if (rep.extrema.empty()) return rep;

  double uptick = -std::numeric_limits<double>::infinity();
  for (size_t i = 1; i < rep.extrema.size(); ++i)
    uptick = std::max(uptick, rep.extrema[i].second - rep.extrema[i - 1].second);
  rep.max_uptick = rep.extrema.size() > 1 ? uptick : 0.0;
  rep.strictly_decreasing =
      rep.extrema.size() > 1 && rep.max_uptick < 1e-10;
  rep.tail = rep.extrema.back().second;
  return rep;
}

}  // namespace pmc
