#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include <doctest.h>

#include "pmc/diagnostics.hpp"

using namespace pmc;

namespace {

Trajectory run(CurvatureSign sign, int dim, double xi, Nonlinearity nl,
               double r_max, double rel_tol = 1e-10, double abs_tol = 1e-12) {
  Problem p{sign, dim, xi, std::move(nl)};
  IntegrationControls c;
  c.r_max = r_max;
  c.rel_tol = rel_tol;
  c.abs_tol = abs_tol;
  return integrate(p, c);
}

}  // namespace

TEST_SUITE("diagnostics") {

TEST_CASE("h functions at reference points") {
  CHECK(h_plus(0.0) == 0.0);
  CHECK(h_plus(1.0) ==
        doctest::Approx(1.0 - 1.0 / std::sqrt(2.0)).epsilon(1e-15));
  CHECK(h_minus(0.6) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(h_plus_inverse(0.0) == 0.0);
  CHECK(h_plus_inverse(1.0 - 1.0 / std::sqrt(2.0)) ==
        doctest::Approx(1.0).epsilon(1e-14));
  CHECK(h_minus_inverse(0.25) == doctest::Approx(0.6).epsilon(1e-14));
}

TEST_CASE("h domain errors") {
  CHECK_THROWS_AS(h_minus(1.0), std::domain_error);
  CHECK_THROWS_AS(h_minus(-1.5), std::domain_error);
  CHECK_THROWS_AS(h_plus_inverse(1.0), std::domain_error);
  CHECK_THROWS_AS(h_plus_inverse(-0.1), std::domain_error);
  CHECK_THROWS_AS(h_minus_inverse(-0.1), std::domain_error);
}

TEST_CASE("h functions are exactly even") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> tp(0.0, 50.0);
  std::uniform_real_distribution<double> tm(0.0, 0.999);
  for (int i = 0; i < 1000; ++i) {
    const double a = tp(rng);
    CHECK(h_plus(a) == h_plus(-a));
    const double b = tm(rng);
    CHECK(h_minus(b) == h_minus(-b));
  }
}

TEST_CASE("round-trip inversion within 1e-14") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> sp(0.0, 0.95);
  std::uniform_real_distribution<double> sm(0.0, 2.0);
  for (int i = 0; i < 1000; ++i) {
    const double s1 = sp(rng);
    CHECK(std::abs(h_plus(h_plus_inverse(s1)) - s1) <= 1e-14);
    const double s2 = sm(rng);
    CHECK(std::abs(h_minus(h_minus_inverse(s2)) - s2) <= 1e-14);
  }
  std::uniform_real_distribution<double> tp(0.0, 20.0);
  std::uniform_real_distribution<double> tm(0.0, 0.99);
  for (int i = 0; i < 1000; ++i) {
    const double t1 = tp(rng);
    CHECK(std::abs(h_plus_inverse(h_plus(t1)) - t1) <= 1e-12 * (1.0 + t1));
    const double t2 = tm(rng);
    CHECK(std::abs(h_minus_inverse(h_minus(t2)) - t2) <= 1e-13);
  }
}

TEST_CASE("energy identity residual, N=1") {
  const Trajectory euclid =
      run(CurvatureSign::Euclidean, 1, 1.0, make_sine(), 50.0);
  const auto rep1 = energy_identity_residual(euclid);
  REQUIRE(rep1.max_identity_residual.has_value());
  CHECK(*rep1.max_identity_residual <= 1e-8);

  const Trajectory lorentz =
      run(CurvatureSign::Lorentz, 1, 0.9, make_cubic(), 50.0);
  const auto rep2 = energy_identity_residual(lorentz);
  CHECK(*rep2.max_identity_residual <= 1e-8);

  const Trajectory zero =
      run(CurvatureSign::Euclidean, 1, 0.0, make_sine(), 50.0);
  CHECK(*energy_identity_residual(zero).max_identity_residual <= 1e-12);
}

TEST_CASE("energy residual tracks the integrator tolerance") {
  const Trajectory coarse =
      run(CurvatureSign::Euclidean, 1, 1.0, make_sine(), 50.0, 1e-8, 1e-10);
  const Trajectory fine =
      run(CurvatureSign::Euclidean, 1, 1.0, make_sine(), 50.0, 1e-12, 1e-14);
  const double rc = *energy_identity_residual(coarse).max_identity_residual;
  const double rf = *energy_identity_residual(fine).max_identity_residual;
  CHECK(rc / rf >= 1e2);
}

TEST_CASE("energy identity residual rejects N>=2") {
  const Trajectory t = run(CurvatureSign::Euclidean, 2, 1.0, make_sine(), 20.0);
  CHECK_THROWS_AS(energy_identity_residual(t), std::invalid_argument);
}

TEST_CASE("Lyapunov profile, N>=2") {
  const Trajectory euclid =
      run(CurvatureSign::Euclidean, 2, 1.0, make_sine(), 100.0);
  const auto rep = lyapunov_profile(euclid);
  REQUIRE(rep.max_z_uptick.has_value());
  CHECK(*rep.max_z_uptick <= 1e-9);

  const Trajectory lorentz =
      run(CurvatureSign::Lorentz, 3, 0.5, make_linear(1.0), 100.0);
  const auto rep2 = lyapunov_profile(lorentz);
  CHECK(*rep2.max_z_uptick <= 1e-9);
  for (const auto& [r, z] : rep2.z_values) CHECK(z >= -1e-9);

  const Trajectory zero =
      run(CurvatureSign::Euclidean, 2, 0.0, make_sine(), 50.0);
  for (const auto& [r, z] : lyapunov_profile(zero).z_values)
    CHECK(std::abs(z) <= 1e-12);
}

TEST_CASE("full energy identity with the dissipative term, N>=2") {
  const Trajectory t =
      run(CurvatureSign::Euclidean, 2, 1.0, make_sine(), 60.0);
  CHECK(full_energy_residual(t) <= 1e-6);
  const Trajectory tl =
      run(CurvatureSign::Lorentz, 3, 0.8, make_cubic(), 60.0);
  CHECK(full_energy_residual(tl) <= 1e-6);
}

TEST_CASE("symmetry check, N=1") {
  const Trajectory lorentz =
      run(CurvatureSign::Lorentz, 1, 1.0, make_sine(), 40.0);
  const auto rep = symmetry_check(lorentz);
  REQUIRE(rep.conclusive);
  CHECK(rep.mirror_residual <= 1e-7);
  CHECK(rep.antisymmetry_residual <= 1e-7);

  const Trajectory euclid =
      run(CurvatureSign::Euclidean, 1, 0.5, make_cubic(), 60.0);
  const auto rep2 = symmetry_check(euclid);
  REQUIRE(rep2.conclusive);
  CHECK(rep2.mirror_residual <= 1e-7);
  CHECK(rep2.antisymmetry_residual <= 1e-7);
}

TEST_CASE("symmetry oracle: mirrored re-integration agrees") {
  // Independent check of the interpolation-based method: a fresh
  // integration from the first interior extremum reproduces the samples
  // around it.
  const Trajectory t =
      run(CurvatureSign::Euclidean, 1, 0.5, make_cubic(), 60.0);
  const auto rep = symmetry_check(t);
  REQUIRE(rep.conclusive);
  Problem mirrored{CurvatureSign::Euclidean, 1, t.at(rep.critical_r).u,
                   make_cubic()};
  IntegrationControls c;
  c.r_max = rep.critical_r;
  const Trajectory fresh = integrate(mirrored, c);
  double worst = 0.0;
  for (int j = 1; j <= 32; ++j) {
    const double s = (rep.critical_r - 1e-3) * j / 32.0;
    worst = std::max(worst,
                     std::abs(fresh.at(s).u - t.at(rep.critical_r + s).u));
  }
  CHECK(worst <= 1e-7);
}

TEST_CASE("symmetry check inconclusive without events") {
  const Trajectory t = run(CurvatureSign::Euclidean, 1, 0.0, make_sine(), 20.0);
  CHECK_FALSE(symmetry_check(t).conclusive);
}

TEST_CASE("extrema envelope, N>=2") {
  const Trajectory t =
      run(CurvatureSign::Euclidean, 2, 1.0, make_sine(), 200.0);
  const auto env = extrema_envelope(t);
  REQUIRE(env.extrema.size() >= 10);
  CHECK(env.strictly_decreasing);
  CHECK(env.max_uptick < 1e-10);
  CHECK(env.tail < env.extrema.front().second);
  // the sub-1e-6 tail claim is tied to the decayed flag
  if (t.decayed) CHECK(env.tail < 1e-6);

  const Trajectory tl =
      run(CurvatureSign::Lorentz, 3, 0.9, make_cubic(), 200.0);
  const auto env2 = extrema_envelope(tl);
  CHECK(env2.strictly_decreasing);
}

TEST_CASE("Lorentz gradient bound and the sup-norm claim") {
  // Bounded Lorentz orbits keep |u'| uniformly away from the light cone,
  // and oscillatory orbits peak exactly at the initial height.
  struct Case {
    int dim;
    Nonlinearity nl;
    double xi;
  };
  const Case cases[] = {{1, make_sine(), 2.5},
                        {2, make_cubic(), 0.9},
                        {3, make_linear(1.0), 4.0}};
  for (const Case& c : cases) {
    const Trajectory t = run(CurvatureSign::Lorentz, c.dim, c.xi, c.nl, 120.0);
    const EnergyReport rep =
        c.dim == 1 ? energy_identity_residual(t) : lyapunov_profile(t);
    CHECK(rep.gradient_sup < 1.0 - t.controls.lorentz_margin / 2.0);
    CHECK(std::abs(t.sup_norm - c.xi) <= 1e-8);
  }
}

TEST_CASE("extrema envelope rejects N=1") {
  const Trajectory t = run(CurvatureSign::Euclidean, 1, 1.0, make_sine(), 30.0);
  CHECK_THROWS_AS(extrema_envelope(t), std::invalid_argument);
}

}  // TEST_SUITE
