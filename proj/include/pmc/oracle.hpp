#pragma once

#include "pmc/dynamics.hpp"

namespace pmc {

struct PeriodEstimate {
  double quarter_period = 0.0;
  double period = 0.0;  // exactly 4 * quarter_period
  double quadrature_error_bound = 0.0;
};

/// Integrator-free period of the N = 1 orbit through u(0) = xi, u'(0) = 0,
/// from the first integral: along the quarter swing from the turning point
/// down to the first zero, |u'| = Phi(G(xi) - G(u)) with Phi the inverse of
/// H+ (Euclidean) or H- (Lorentz), so
///   quarter_period = int_0^|xi| du / Phi(G(xi) - G(u)).
/// The inverse-square-root turning-point singularity at u = |xi| is removed
/// by the substitution u = |xi| sin(theta). Relative tolerance 1e-9.
///
/// Domain errors: xi = 0; |xi| >= alpha; Euclidean with G(xi) > 1 - 1e-12
/// (no periodic orbit there).
PeriodEstimate time_map_period(CurvatureSign sign,
                               const Nonlinearity& nonlinearity, double xi);

/// Euclidean N = 1 blow-up radius from the same first integral: u descends
/// from xi to the height u* where G(xi) - G(u*) = 1 and |u'| diverges, so
///   r* = int_{u*}^{xi} du / Phi+(G(xi) - G(u)).
/// Requires 0 < xi < alpha and G(xi) >= 1 - 1e-12 (the boundary band is
/// admitted so double-rounded threshold heights cross-check cleanly).
double blowup_radius_bound(const Nonlinearity& nonlinearity, double xi);

}  // namespace pmc
