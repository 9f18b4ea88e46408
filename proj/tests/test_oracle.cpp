#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "pmc/diagnostics.hpp"
#include "pmc/oracle.hpp"
#include "pmc/quadrature.hpp"

using namespace pmc;

TEST_SUITE("oracle") {

TEST_CASE("small-amplitude limit: period -> 2 pi for g = u") {
  for (auto sign : {CurvatureSign::Euclidean, CurvatureSign::Lorentz}) {
    const auto est = time_map_period(sign, make_linear(1.0), 1e-4);
    CHECK(std::abs(est.period - 2.0 * std::numbers::pi) <= 1e-6);
    CHECK(est.period == 4.0 * est.quarter_period);
    CHECK(est.quadrature_error_bound <= 1e-8);
  }
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(
      time_map_period(CurvatureSign::Euclidean, make_sine(),
                      std::numbers::pi / 2),
      std::domain_error);  // G(xi) = 1: no Euclidean periodic orbit
  CHECK_THROWS_AS(time_map_period(CurvatureSign::Lorentz, make_sine(), 0.0),
                  std::domain_error);
  CHECK_THROWS_AS(time_map_period(CurvatureSign::Lorentz, make_cubic(), 1.5),
                  std::domain_error);  // above alpha
  CHECK_THROWS_AS(blowup_radius_bound(make_linear(1.0), 1.0),
                  std::domain_error);  // G = 1/2 < 1
  CHECK_THROWS_AS(blowup_radius_bound(make_cubic(), 0.9), std::domain_error);
}

TEST_CASE("sign ordering: Lorentz period exceeds the Euclidean one") {
  // H- forces |u'| < 1 while the Euclidean swing is unconstrained, so the
  // Lorentz traversal of the same height range is slower.
  const auto e = time_map_period(CurvatureSign::Euclidean, make_sine(), 1.0);
  const auto l = time_map_period(CurvatureSign::Lorentz, make_sine(), 1.0);
  CHECK(l.period > e.period);
}

TEST_CASE("substitution correctness against naive quadrature plus tail") {
  // The regularized time map must agree with adaptive quadrature on
  // [0, xi - w] plus the analytic inverse-square-root tail over [xi - w, xi].
  struct Case {
    CurvatureSign sign;
    Nonlinearity nl;
    double xi;
  };
  const Case cases[] = {
      {CurvatureSign::Euclidean, make_sine(), 1.0},
      {CurvatureSign::Lorentz, make_sine(), 2.0},
      {CurvatureSign::Euclidean, make_cubic(), 0.7},
      {CurvatureSign::Lorentz, make_linear(1.0), 1.5},
  };
  const double w = 1e-6;
  for (const Case& c : cases) {
    const double g_xi = primitive(c.nl, c.xi);
    auto naive = [&](double u) {
      const double s = g_xi - primitive(c.nl, u);
      return 1.0 / (c.sign == CurvatureSign::Euclidean ? h_plus_inverse(s)
                                                       : h_minus_inverse(s));
    };
    const double body =
        integrate_adaptive(naive, 0.0, c.xi - w, 0.0, 1e-12).value;
    const double tail = std::sqrt(2.0 * w / c.nl.g(c.xi));
    const double quarter =
        time_map_period(c.sign, c.nl, c.xi).quarter_period;
    CHECK(std::abs(quarter - (body + tail)) <= 1e-8);
  }
}

TEST_CASE("period depends smoothly on xi (no numerical jumps)") {
  // The genuine dT/dxi of the sine time map is ~2e-3 relative per 0.01
  // step near xi = 1, so first differences cannot separate real variation
  // from a jump; second differences can.
  for (auto sign : {CurvatureSign::Euclidean, CurvatureSign::Lorentz}) {
    std::vector<double> periods;
    for (int i = 0; i <= 20; ++i)
      periods.push_back(
          time_map_period(sign, make_sine(), 0.8 + 0.01 * i).period);
    for (size_t i = 1; i + 1 < periods.size(); ++i) {
      const double second_diff =
          periods[i + 1] - 2.0 * periods[i] + periods[i - 1];
      CHECK(std::abs(second_diff) / periods[i] <= 1e-4);
    }
  }
}

TEST_CASE("period is even in xi") {
  const auto plus = time_map_period(CurvatureSign::Lorentz, make_sine(), 1.3);
  const auto minus =
      time_map_period(CurvatureSign::Lorentz, make_sine(), -1.3);
  CHECK(plus.period == doctest::Approx(minus.period).epsilon(1e-12));
}

TEST_CASE("blow-up radius: finite values at and above the threshold") {
  // sine at the threshold height: u* = 0 and the integrand is bounded
  const double r_sine =
      blowup_radius_bound(make_sine(), std::numbers::pi / 2);
  CHECK(r_sine > 0.0);
  CHECK(std::isfinite(r_sine));

  const double r_linear = blowup_radius_bound(make_linear(1.0), std::sqrt(2.0));
  CHECK(r_linear > 0.0);
  CHECK(std::isfinite(r_linear));

  // strictly above threshold: u* > 0
  const double r_above = blowup_radius_bound(make_sine(), 1.8);
  CHECK(r_above > 0.0);
  CHECK(r_above < r_sine);  // more energy, earlier cap
}

TEST_CASE("oracle versus integrator on a small periodic grid") {
  struct Pair {
    CurvatureSign sign;
    Nonlinearity nl;
    double lo, hi;
  };
  const Pair pairs[] = {
      {CurvatureSign::Euclidean, make_sine(), 0.2, 1.4},
      {CurvatureSign::Lorentz, make_cubic(), 0.1, 0.9},
  };
  for (const Pair& pr : pairs) {
    for (int i = 0; i < 5; ++i) {
      const double xi = pr.lo + (pr.hi - pr.lo) * i / 4.0;
      const auto est = time_map_period(pr.sign, pr.nl, xi);
      Problem p{pr.sign, 1, xi, pr.nl};
      IntegrationControls c;
      c.r_max = 4.6 * est.period;
      const Trajectory t = integrate(p, c);
      const auto zeros = t.event_radii(EventKind::Zero);
      REQUIRE(zeros.size() >= 6);
      double mean_gap = 0.0;
      for (size_t j = 1; j < zeros.size(); ++j)
        mean_gap += zeros[j] - zeros[j - 1];
      mean_gap /= (zeros.size() - 1);
      const double period_integrator = 2.0 * mean_gap;
      CHECK(std::abs(period_integrator - est.period) / est.period <= 1e-6);
    }
  }
}

}  // TEST_SUITE
