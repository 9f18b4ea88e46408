#pragma once

#include <iosfwd>
#include <map>
#include <string>

#include <json.hpp>

#include "pmc/sweep.hpp"

namespace pmc::io {

/// Shortest 17-significant-digit representation; round-trips bit-exactly.
std::string format_double(double v);

std::string sign_name(CurvatureSign sign);
CurvatureSign parse_sign(const std::string& name);
std::string regime_name(Regime regime);
std::string termination_name(TerminationCause cause);
std::string event_kind_name(EventKind kind);

struct TrajectoryFile {
  std::map<std::string, std::string> metadata;
  std::vector<State> samples;
  std::vector<Event> events;
  std::map<std::string, std::string> diagnostics;
  double sup_norm = 0.0;
};

/// Single-file CSV artifact: `# key=value` metadata, then `# samples`,
/// `# events`, `# diagnostics` sections. stride thins the sample rows
/// (events always kept; the final sample always kept).
std::string trajectory_csv(const Trajectory& trajectory, int stride = 1);
nlohmann::json trajectory_json(const Trajectory& trajectory, int stride = 1);
TrajectoryFile parse_trajectory_csv(std::istream& in);

std::string sweep_csv(const SweepSpec& spec, const SweepResult& result);
nlohmann::json sweep_json(const SweepSpec& spec, const SweepResult& result);

nlohmann::json classification_json(const Problem& problem,
                                   const IntegrationControls& controls,
                                   const ClassificationReport& report);
std::string classification_csv(const Problem& problem,
                               const IntegrationControls& controls,
                               const ClassificationReport& report);

nlohmann::json validation_json(const Nonlinearity& spec, int sample_count,
                               double range, const ValidationReport& report);
std::string validation_csv(const Nonlinearity& spec, int sample_count,
                           double range, const ValidationReport& report);

/// Sweep configuration from JSON. Unknown or missing keys raise
/// std::invalid_argument naming the offending key. worker_count falls back
/// to `default_workers` when absent.
SweepSpec parse_sweep_config(const nlohmann::json& config,
                             int default_workers = 1);

}  // namespace pmc::io
