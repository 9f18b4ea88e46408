#include <cmath>
#include <numbers>

#include <doctest.h>

#include "pmc/quadrature.hpp"

using pmc::integrate_adaptive;

TEST_SUITE("quadrature") {

TEST_CASE("polynomial is exact") {
  auto f = [](double x) { return 3.0 * x * x; };
  const auto q = integrate_adaptive(f, 0.0, 2.0, 1e-14);
  CHECK(q.value == doctest::Approx(8.0).epsilon(1e-14));
}

TEST_CASE("sin over [0, pi]") {
  const auto q = integrate_adaptive([](double x) { return std::sin(x); }, 0.0,
                                    std::numbers::pi, 1e-13);
  CHECK(std::abs(q.value - 2.0) <= 1e-13);
  CHECK(q.error_estimate <= 1e-13);
}

TEST_CASE("orientation and empty interval") {
  auto f = [](double x) { return x; };
  CHECK(integrate_adaptive(f, 1.0, 0.0, 1e-14).value ==
        doctest::Approx(-0.5).epsilon(1e-14));
  CHECK(integrate_adaptive(f, 1.0, 1.0, 1e-14).value == 0.0);
}

TEST_CASE("integrable endpoint behavior converges") {
  // 1/sqrt(x) regularized by x = t^2 would be smooth; unregularized it
  // still converges because endpoints are never sampled.
  const auto q = integrate_adaptive(
      [](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, 1e-9, 0.0, 5000);
  CHECK(std::abs(q.value - 2.0) <= 1e-8);
}

TEST_CASE("budget exhaustion carries the achieved tolerance") {
  // A hard oscillatory integrand with an absurd tolerance and tiny budget.
  bool threw = false;
  try {
    integrate_adaptive([](double x) { return std::sin(1.0 / (x + 1e-4)); },
                       0.0, 1.0, 1e-30, 0.0, 8);
  } catch (const pmc::QuadratureError& e) {
    threw = true;
    CHECK(e.achieved_tolerance() > 0.0);
    CHECK(std::isfinite(e.achieved_tolerance()));
  }
  CHECK(threw);
}

}  // TEST_SUITE
