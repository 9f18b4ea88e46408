#pragma once

#include <functional>
#include <stdexcept>
#include <string>

namespace pmc {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int subdivisions = 0;
};

/// Thrown when adaptive refinement exhausts its budget; carries the error
/// estimate that was actually reached.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double achieved)
      : std::runtime_error(what), achieved_(achieved) {}
  double achieved_tolerance() const { return achieved_; }

 private:
  double achieved_;
};

/// Adaptive Gauss-Kronrod (G7,K15) quadrature of f over [a, b].
///
/// Always splits the interval with the largest error estimate until the
/// summed estimate meets max(abs_tol, rel_tol * |value|). Endpoints are
/// never evaluated, so integrable endpoint singularities that have been
/// regularized away (value -> finite limit) are safe.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    double a, double b, double abs_tol,
                                    double rel_tol = 0.0,
                                    int max_subdivisions = 2048);

}  // namespace pmc
