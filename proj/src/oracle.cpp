#include "pmc/oracle.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "pmc/diagnostics.hpp"
#include "pmc/quadrature.hpp"

namespace pmc {
namespace {

// Turning-point integrand after u = u0 + span * sin(theta). G(xi) - G(u)
// vanishes linearly at the turning point (g(|xi|) != 0 by (g4)), so the
// cos(theta) factors cancel and the integrand extends smoothly to pi/2.
double swing_integrand(const Nonlinearity& nl, CurvatureSign sign, double g_xi,
                       double u0, double span, double turning, double theta) {
  const double u = u0 + span * std::sin(theta);
  double s = g_xi - primitive(nl, u);
  if (sign == CurvatureSign::Euclidean && s >= 1.0)
    return 0.0;  // gradient cap: 1/Phi+ -> 0
  if (s <= 0.0) {
    // Rounded past the turning point; fall back to the linearization.
    s = nl.g(turning) * (turning - u);
    if (s <= 0.0) return std::sqrt(turning / nl.g(turning));
  }
  const double phi = sign == CurvatureSign::Euclidean ? h_plus_inverse(s)
                                                      : h_minus_inverse(s);
  return span * std::cos(theta) / phi;
}

}  // namespace

PeriodEstimate time_map_period(CurvatureSign sign,
                               const Nonlinearity& nonlinearity, double xi) {
  const double a = std::abs(xi);
  if (!(a > 0.0))
    throw std::domain_error("time_map_period: xi must be nonzero");
  if (!(a < nonlinearity.alpha))
    throw std::domain_error("time_map_period: |xi| must lie below alpha");
  const double g_xi = primitive(nonlinearity, a);
  if (sign == CurvatureSign::Euclidean && g_xi > 1.0 - 1e-12)
    throw std::domain_error(
        "time_map_period: Euclidean orbit requires G(xi) < 1");
  if (!(nonlinearity.g(a) > 0.0))
    throw std::logic_error(
        "time_map_period: degenerate turning point g(|xi|) = 0");

  auto f = [&](double theta) {
    return swing_integrand(nonlinearity, sign, g_xi, 0.0, a, a, theta);
  };
  const QuadratureResult q =
      integrate_adaptive(f, 0.0, std::numbers::pi / 2, 0.0, 1e-10);

  PeriodEstimate est;
  est.quarter_period = q.value;
  est.period = 4.0 * q.value;
  est.quadrature_error_bound = 4.0 * q.error_estimate;
  return est;
}

double blowup_radius_bound(const Nonlinearity& nonlinearity, double xi) {
  if (!(xi > 0.0) || !(xi < nonlinearity.alpha))
    throw std::domain_error("blowup_radius_bound: requires 0 < xi < alpha");
  const double g_xi = primitive(nonlinearity, xi);
  if (g_xi < 1.0 - 1e-12)
    throw std::domain_error("blowup_radius_bound: requires G(xi) >= 1");

  // Height at which the gradient diverges: G(xi) - G(u*) = 1. When G(xi)
  // sits in the rounding band around 1, u* collapses to 0.
  double u_star = 0.0;
  const double target = g_xi - 1.0;
  if (target > 0.0) {
    double lo = 0.0, hi = xi;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double d = primitive(nonlinearity, mid) - target;
      if (std::abs(d) <= 1e-13) {
        lo = hi = mid;
        break;
      }
      (d < 0.0 ? lo : hi) = mid;
    }
    u_star = 0.5 * (lo + hi);
  }

  const double span = xi - u_star;
  auto f = [&](double theta) {
    return swing_integrand(nonlinearity, CurvatureSign::Euclidean, g_xi,
                           u_star, span, xi, theta);
  };
  return integrate_adaptive(f, 0.0, std::numbers::pi / 2, 0.0, 1e-9).value;
}

}  // namespace pmc
