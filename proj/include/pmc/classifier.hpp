#pragma once

#include <optional>
#include <string>
#include <utility>

#include "pmc/integrator.hpp"

namespace pmc {

enum class Regime {
  Constant,
  MonotoneDivergence,
  GradientBlowup,
  PeriodicOscillating,
  LocalizedOscillating,
  TheoryBoundary,
  OutsideTheory,
};

struct Evidence {
  TerminationCause termination = TerminationCause::HorizonReached;
  int zero_count = 0;
  int critical_count = 0;
  std::optional<double> period;  // 2 * mean zero-to-zero spacing
  double period_spread = 0.0;    // (max - min)/mean over the spacings
  double envelope_first = 0.0;
  double envelope_tail = 0.0;
  bool envelope_strictly_decreasing = false;
  bool decayed = false;
  bool monotone_growth = false;  // |u| nondecreasing and grown beyond |xi|
  double sup_norm = 0.0;
  double gradient_sup = 0.0;
  bool anomaly = false;  // numerically inconsistent termination, flagged
  std::string note;
};

struct ClassificationReport {
  Regime predicted = Regime::OutsideTheory;
  Regime observed = Regime::OutsideTheory;
  bool agree = false;
  Evidence evidence;
};

/// Theory-side regime from the classification decision table; integrates
/// nothing.
Regime predict(const Problem& problem);

/// Evidence-side regime from a completed trajectory. Ambiguous evidence
/// maps to OutsideTheory with the evidence attached, never a silent guess.
std::pair<Regime, Evidence> observe(const Trajectory& trajectory);

/// Agreement semantics: exact match, vacuous when the prediction is
/// TheoryBoundary/OutsideTheory, and the Euclidean divergence regime accepts
/// either divergence mode (height or gradient).
bool regimes_agree(Regime predicted, Regime observed, CurvatureSign sign,
                   const Evidence& evidence);

/// integrate + observe + predict, bundled.
ClassificationReport classify(const Problem& problem,
                              const IntegrationControls& controls = {});

}  // namespace pmc
