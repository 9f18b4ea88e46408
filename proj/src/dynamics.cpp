#include "pmc/dynamics.hpp"

#include <cmath>
#include <stdexcept>

namespace pmc {
namespace {

inline Slope rhs_unchecked(const Problem& problem, const State& state,
                           double factor) {
  // factor = 1 +/- u'^2, already validated by the caller.
  const double gu = problem.nonlinearity.g(state.u);
  Slope s;
  s.du = state.up;
  s.dup = -factor * std::sqrt(factor) * gu;
  if (problem.dimension > 1)
    s.dup -= (problem.dimension - 1) / state.r * factor * state.up;
  return s;
}

}  // namespace

Slope rhs(const Problem& problem, const State& state) {
  if (!(state.r > 0.0)) throw std::domain_error("rhs: r must be positive");
  double factor;
  if (problem.sign == CurvatureSign::Lorentz) {
    if (std::abs(state.up) > 1.0 - kLorentzDomainMargin)
      throw std::domain_error("rhs: Lorentz light-cone constraint violated");
    factor = 1.0 - state.up * state.up;
  } else {
    factor = 1.0 + state.up * state.up;
  }
  return rhs_unchecked(problem, state, factor);
}

bool try_rhs(const Problem& problem, const State& state, Slope& out) {
  if (!(state.r > 0.0) || !std::isfinite(state.u) || !std::isfinite(state.up))
    return false;
  double factor;
  if (problem.sign == CurvatureSign::Lorentz) {
    if (std::abs(state.up) > 1.0 - kLorentzDomainMargin) return false;
    factor = 1.0 - state.up * state.up;
  } else {
    factor = 1.0 + state.up * state.up;
    if (!std::isfinite(factor)) return false;
  }
  out = rhs_unchecked(problem, state, factor);
  return std::isfinite(out.du) && std::isfinite(out.dup);
}

State origin_start(const Problem& problem, double delta) {
  if (!(delta > 0.0) || delta > 1e-3)
    throw std::invalid_argument("origin_start: delta must be in (0, 1e-3]");
  if (problem.dimension < 1)
    throw std::invalid_argument("origin_start: dimension must be >= 1");
  const double n = problem.dimension;
  const double gxi = problem.nonlinearity.g(problem.xi);
  State s;
  s.r = delta;
  s.u = problem.xi - gxi * delta * delta / (2.0 * n);
  s.up = -gxi * delta / n;
  return s;
}

}  // namespace pmc
