#pragma once

#include "pmc/nonlinearity.hpp"

namespace pmc {

enum class CurvatureSign { Euclidean, Lorentz };

/// Radial Cauchy problem u(0) = xi, u'(0) = 0 for the prescribed mean
/// curvature operator with the given sign and dimension.
struct Problem {
  CurvatureSign sign = CurvatureSign::Euclidean;
  int dimension = 1;  // N >= 1
  double xi = 0.0;
  Nonlinearity nonlinearity;
};

struct State {
  double r = 0.0;
  double u = 0.0;
  double up = 0.0;  // u'
};

struct Slope {
  double du = 0.0;
  double dup = 0.0;
};

/// Hard domain margin for the Lorentz light cone inside rhs(); states with
/// |u'| above 1 - margin are numerically meaningless. The integrator's own
/// rejection guard (controls.lorentz_margin) is a separate, looser threshold.
inline constexpr double kLorentzDomainMargin = 1e-14;

/// First-order form of the radial equation, solved for u'':
///   u'' = -(1 +/- u'^2)^{3/2} g(u) - ((N-1)/r)(1 +/- u'^2) u'
/// with "+" in the Euclidean case and "-" in the Lorentz case. For N = 1
/// the (N-1)/r term is skipped entirely, so the slope is r-independent.
/// Throws std::domain_error on r <= 0 or a Lorentz light-cone violation.
Slope rhs(const Problem& problem, const State& state);

/// Non-throwing variant: returns false (leaving out untouched semantics
/// unspecified) when the state is outside the domain or g evaluates
/// non-finite. Used by the integrator to reject trial stages.
bool try_rhs(const Problem& problem, const State& state, Slope& out);

/// Second-order Taylor state at r = delta regularizing the (N-1)/r start:
///   u  = xi - g(xi) delta^2 / (2N),   u' = -g(xi) delta / N.
/// Requires 0 < delta <= 1e-3.
State origin_start(const Problem& problem, double delta);

}  // namespace pmc
