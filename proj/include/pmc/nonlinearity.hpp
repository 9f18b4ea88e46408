#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace pmc {

/// A nonlinearity g together with its primitive G(t) = int_0^t g(s) ds,
/// its sign-change point alpha (g > 0 on (0, alpha), g < 0 beyond when
/// alpha is finite), and its slope at the origin.
///
/// alpha == +infinity is the sentinel for "g stays positive on (0, inf)";
/// classification code branches on std::isfinite(alpha), never on a
/// magnitude comparison.
struct Nonlinearity {
  std::function<double(double)> g;
  /// Optional closed form for G. When absent, primitive() falls back to
  /// adaptive quadrature at absolute tolerance 1e-12.
  std::function<double(double)> closed_form_G;
  double alpha = std::numeric_limits<double>::infinity();
  double g_prime_at_zero = 0.0;
  std::string label;

  bool has_closed_form() const { return static_cast<bool>(closed_form_G); }
  bool alpha_is_finite() const { return std::isfinite(alpha); }
};

struct HypothesisCheck {
  std::string hypothesis;  // "g1", "g2", "g3", "g4"
  bool passed = false;
  std::string detail;
};

struct ValidationReport {
  std::vector<HypothesisCheck> checks;
  std::vector<double> evaluation_failures;  // sample points where g was non-finite

  bool all_passed() const;
  const HypothesisCheck* find(const std::string& hypothesis) const;
};

/// Sampling-based check of the structural hypotheses on [-range, range]:
/// finite evaluation everywhere (g1), oddness (g2), positive slope at the
/// origin consistent with the declared g'(0) (g3), and the sign structure
/// around alpha (g4). Never mutates the spec; non-finite evaluations are
/// reported, not thrown.
ValidationReport validate(const Nonlinearity& spec, int sample_count,
                          double range);

/// G(t). Exact when a closed form is supplied, else adaptive quadrature to
/// absolute tolerance 1e-12 (QuadratureError on non-convergence).
double primitive(const Nonlinearity& spec, double t);

/// Smallest xi* in (0, alpha) with G(xi*) = 1, to |G(xi*) - 1| <= 1e-12,
/// or nullopt when G stays below 1 there.
std::optional<double> threshold_height(const Nonlinearity& spec);

// Built-in nonlinearities.
Nonlinearity make_sine();              // g(u) = sin u,        alpha = pi
Nonlinearity make_cubic();             // g(u) = u (1 - u^2),  alpha = 1
Nonlinearity make_linear(double lambda);  // g(u) = lambda u,  alpha = +inf
Nonlinearity make_saturating();        // g(u) = u / (1 + u^2), alpha = +inf

/// Registry lookup by identifier: "sin", "cubic", "linear", "saturating".
/// lambda applies to "linear" only.
Nonlinearity make_nonlinearity(const std::string& kind, double lambda = 1.0);

}  // namespace pmc
