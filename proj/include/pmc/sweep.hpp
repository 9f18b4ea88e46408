#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pmc/classifier.hpp"

namespace pmc {

struct SweepSpec {
  std::vector<CurvatureSign> signs;
  std::vector<int> dimensions;
  std::vector<Nonlinearity> nonlinearities;
  std::vector<double> xi_grid;
  IntegrationControls controls;
  int worker_count = 1;
};

struct SweepCell {
  CurvatureSign sign = CurvatureSign::Euclidean;
  int dimension = 1;
  std::string g_label;
  double xi = 0.0;
  ClassificationReport report;
  // energy summary
  std::optional<double> energy_residual;  // N = 1
  std::optional<double> max_z_uptick;     // N >= 2
  bool stalled = false;
  std::string error;
};

struct SweepResult {
  std::vector<SweepCell> cells;  // lexicographic in (sign, N, g, xi)
  std::vector<std::size_t> disagreement_indices;
  double wall_seconds = 0.0;  // execution detail; never serialized
};

std::vector<double> make_linear_grid(double min, double max, int count);

/// Runs every (sign, N, nonlinearity, xi) cell through integrate ->
/// diagnostics -> classify. Deterministic lexicographic output ordering
/// regardless of worker_count; a stalled cell is recorded in place with its
/// partial evidence, never fatal.
SweepResult run_sweep(const SweepSpec& spec);

}  // namespace pmc
