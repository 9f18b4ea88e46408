#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "pmc/integrator.hpp"

namespace pmc {

// Gradient energy densities and their inverses on the relevant branches.
//   h_plus(t)  = 1 - 1/sqrt(1+t^2)   in [0, 1)
//   h_minus(t) = 1/sqrt(1-t^2) - 1   in [0, inf), |t| < 1
// Both are even; the implementations work in t^2 so evenness is exact.
double h_plus(double t);
double h_minus(double t);
double h_plus_inverse(double s);   // s in [0, 1)
double h_minus_inverse(double s);  // s >= 0

struct EnergyReport {
  /// N = 1: sup over samples of |H(u') - (G(xi) - G(u))|.
  std::optional<double> max_identity_residual;
  /// N >= 2: Z = H(u') + G(u) at every sample.
  std::vector<std::pair<double, double>> z_values;
  /// N >= 2: largest increase of Z between consecutive samples (<= 0 when
  /// the dissipation is resolved cleanly).
  std::optional<double> max_z_uptick;
  double gradient_sup = 0.0;
};

/// First-integral residual along an N = 1 trajectory.
EnergyReport energy_identity_residual(const Trajectory& trajectory);

/// Z profile and monotonicity defect along an N >= 2 trajectory.
EnergyReport lyapunov_profile(const Trajectory& trajectory);

/// N >= 2 full energy identity including the dissipative integral term,
/// accumulated over the dense output:
///   H(u') + (N-1) int_0^r u'^2 / (s sqrt(1 +/- u'^2)) ds = G(xi) - G(u).
/// Returns the max residual over segment endpoints. Tolerance behavior is
/// quadrature-limited, looser than the N = 1 identity.
double full_energy_residual(const Trajectory& trajectory);

struct SymmetryReport {
  bool conclusive = false;
  double critical_r = 0.0;
  double zero_r = 0.0;
  /// max_s |u(rc + s) - u(rc - s)| over a 64-point grid
  double mirror_residual = 0.0;
  /// max_s |u(rz + s) + u(rz - s)| over a 64-point grid
  double antisymmetry_residual = 0.0;
};

/// Symmetry about the first interior critical point and antisymmetry about
/// the first zero, evaluated on the dense output (N = 1 only). Marked
/// inconclusive when the trajectory lacks the events or the window.
SymmetryReport symmetry_check(const Trajectory& trajectory);

struct EnvelopeReport {
  std::vector<std::pair<double, double>> extrema;  // (r, |u|)
  bool strictly_decreasing = false;  // pairwise, with slack 1e-10
  double max_uptick = 0.0;           // largest |u|_{k+1} - |u|_k
  double tail = 0.0;                 // last |u|
};

/// Absolute heights at successive critical points (N >= 2).
EnvelopeReport extrema_envelope(const Trajectory& trajectory);

}  // namespace pmc
