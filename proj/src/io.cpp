#include "pmc/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <sstream>
#include <stdexcept>

#include "pmc/diagnostics.hpp"
#include "pmc/version.hpp"

namespace pmc::io {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string sign_name(CurvatureSign sign) {
  return sign == CurvatureSign::Euclidean ? "euclidean" : "lorentz";
}

CurvatureSign parse_sign(const std::string& name) {
  if (name == "euclidean" || name == "euclid" || name == "+")
    return CurvatureSign::Euclidean;
  if (name == "lorentz" || name == "minkowski" || name == "-")
    return CurvatureSign::Lorentz;
  throw std::invalid_argument("parse_sign: unknown sign '" + name +
                              "' (expected euclidean or lorentz)");
}

std::string regime_name(Regime regime) {
  switch (regime) {
    case Regime::Constant: return "constant";
    case Regime::MonotoneDivergence: return "monotone_divergence";
    case Regime::GradientBlowup: return "gradient_blowup";
    case Regime::PeriodicOscillating: return "periodic_oscillating";
    case Regime::LocalizedOscillating: return "localized_oscillating";
    case Regime::TheoryBoundary: return "theory_boundary";
    case Regime::OutsideTheory: return "outside_theory";
  }
  return "unknown";
}

std::string termination_name(TerminationCause cause) {
  switch (cause) {
    case TerminationCause::GradientBlowup: return "gradient_blowup";
    case TerminationCause::LightConeApproach: return "light_cone_approach";
    case TerminationCause::HeightDivergence: return "height_divergence";
    case TerminationCause::HorizonReached: return "horizon_reached";
    case TerminationCause::EventBudgetExhausted:
      return "event_budget_exhausted";
  }
  return "unknown";
}

std::string event_kind_name(EventKind kind) {
  switch (kind) {
    case EventKind::Zero: return "zero";
    case EventKind::CriticalPoint: return "critical_point";
    case EventKind::Termination: return "termination";
  }
  return "unknown";
}

namespace {

EventKind parse_event_kind(const std::string& name) {
  if (name == "zero") return EventKind::Zero;
  if (name == "critical_point") return EventKind::CriticalPoint;
  if (name == "termination") return EventKind::Termination;
  throw std::invalid_argument("unknown event kind '" + name + "'");
}

TerminationCause parse_termination(const std::string& name) {
  if (name == "gradient_blowup") return TerminationCause::GradientBlowup;
  if (name == "light_cone_approach") return TerminationCause::LightConeApproach;
  if (name == "height_divergence") return TerminationCause::HeightDivergence;
  if (name == "horizon_reached") return TerminationCause::HorizonReached;
  if (name == "event_budget_exhausted")
    return TerminationCause::EventBudgetExhausted;
  throw std::invalid_argument("unknown termination cause '" + name + "'");
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_num(const std::string& s) {
  return std::strtod(s.c_str(), nullptr);
}

void controls_to_csv(std::ostringstream& os, const IntegrationControls& c) {
  os << "# rel_tol=" << format_double(c.rel_tol) << "\n"
     << "# abs_tol=" << format_double(c.abs_tol) << "\n"
     << "# r_max=" << format_double(c.r_max) << "\n"
     << "# max_events=" << c.max_events << "\n"
     << "# up_blowup_threshold=" << format_double(c.up_blowup_threshold)
     << "\n"
     << "# lorentz_margin=" << format_double(c.lorentz_margin) << "\n"
     << "# u_divergence_threshold="
     << (c.u_divergence_threshold ? format_double(*c.u_divergence_threshold)
                                  : std::string("auto"))
     << "\n"
     << "# event_r_tol=" << format_double(c.event_r_tol) << "\n"
     << "# origin_delta=" << format_double(c.origin_delta) << "\n";
}

nlohmann::json controls_to_json(const IntegrationControls& c) {
  nlohmann::json j;
  j["rel_tol"] = c.rel_tol;
  j["abs_tol"] = c.abs_tol;
  j["r_max"] = c.r_max;
  j["max_events"] = c.max_events;
  j["up_blowup_threshold"] = c.up_blowup_threshold;
  j["lorentz_margin"] = c.lorentz_margin;
  if (c.u_divergence_threshold)
    j["u_divergence_threshold"] = *c.u_divergence_threshold;
  else
    j["u_divergence_threshold"] = "auto";
  j["event_r_tol"] = c.event_r_tol;
  j["origin_delta"] = c.origin_delta;
  return j;
}

// Trajectory-level diagnostics rows shared by CSV and JSON outputs.
struct TrajectorySummary {
  int zero_count = 0;
  int critical_count = 0;
  double gradient_sup = 0.0;
  std::optional<double> max_identity_residual;
  std::optional<double> max_z_uptick;
};

TrajectorySummary summarize(const Trajectory& t) {
  TrajectorySummary s;
  s.zero_count = t.count(EventKind::Zero);
  s.critical_count = t.count(EventKind::CriticalPoint);
  if (t.problem.dimension == 1) {
    const EnergyReport rep = energy_identity_residual(t);
    s.gradient_sup = rep.gradient_sup;
    s.max_identity_residual = rep.max_identity_residual;
  } else {
    const EnergyReport rep = lyapunov_profile(t);
    s.gradient_sup = rep.gradient_sup;
    s.max_z_uptick = rep.max_z_uptick;
  }
  return s;
}

nlohmann::json evidence_json(const Evidence& ev) {
  nlohmann::json j;
  j["termination"] = termination_name(ev.termination);
  j["zero_count"] = ev.zero_count;
  j["critical_count"] = ev.critical_count;
  if (ev.period) j["period"] = *ev.period;
  j["period_spread"] = ev.period_spread;
  j["envelope_first"] = ev.envelope_first;
  j["envelope_tail"] = ev.envelope_tail;
  j["envelope_strictly_decreasing"] = ev.envelope_strictly_decreasing;
  j["decayed"] = ev.decayed;
  j["monotone_growth"] = ev.monotone_growth;
  j["sup_norm"] = ev.sup_norm;
  j["gradient_sup"] = ev.gradient_sup;
  j["anomaly"] = ev.anomaly;
  if (!ev.note.empty()) j["note"] = ev.note;
  return j;
}

}  // namespace

std::string trajectory_csv(const Trajectory& t, int stride) {
  if (stride < 1)
    throw std::invalid_argument("trajectory_csv: stride must be >= 1");
  const TrajectorySummary sum = summarize(t);

  std::ostringstream os;
  os << "# pmc trajectory\n"
     << "# schema_version=" << kSchemaVersion << "\n"
     << "# tool_version=" << kVersion << "\n"
     << "# sign=" << sign_name(t.problem.sign) << "\n"
     << "# dimension=" << t.problem.dimension << "\n"
     << "# g=" << t.problem.nonlinearity.label << "\n"
     << "# xi=" << format_double(t.problem.xi) << "\n";
  controls_to_csv(os, t.controls);
  os << "# stride=" << stride << "\n";

  os << "# samples\nr,u,up\n";
  const std::size_t n = t.samples.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (i % stride != 0 && i + 1 != n) continue;
    const State& s = t.samples[i];
    os << format_double(s.r) << ',' << format_double(s.u) << ','
       << format_double(s.up) << "\n";
  }

  os << "# events\nkind,r,u,up,cause\n";
  for (const Event& e : t.events) {
    os << event_kind_name(e.kind) << ',' << format_double(e.r) << ','
       << format_double(e.u) << ',' << format_double(e.up) << ','
       << (e.cause ? termination_name(*e.cause) : std::string()) << "\n";
  }

  os << "# diagnostics\nkey,value\n";
  os << "sup_norm," << format_double(t.sup_norm) << "\n";
  os << "decayed," << (t.decayed ? 1 : 0) << "\n";
  os << "termination," << termination_name(t.termination) << "\n";
  os << "zero_count," << sum.zero_count << "\n";
  os << "critical_point_count," << sum.critical_count << "\n";
  os << "gradient_sup," << format_double(sum.gradient_sup) << "\n";
  if (sum.max_identity_residual)
    os << "max_identity_residual," << format_double(*sum.max_identity_residual)
       << "\n";
  if (sum.max_z_uptick)
    os << "max_z_uptick," << format_double(*sum.max_z_uptick) << "\n";
  return os.str();
}

nlohmann::json trajectory_json(const Trajectory& t, int stride) {
  if (stride < 1)
    throw std::invalid_argument("trajectory_json: stride must be >= 1");
  const TrajectorySummary sum = summarize(t);

  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["tool_version"] = kVersion;
  j["config"] = {{"sign", sign_name(t.problem.sign)},
                 {"dimension", t.problem.dimension},
                 {"g", t.problem.nonlinearity.label},
                 {"xi", t.problem.xi},
                 {"controls", controls_to_json(t.controls)},
                 {"stride", stride}};

  nlohmann::json samples = nlohmann::json::array();
  const std::size_t n = t.samples.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (i % stride != 0 && i + 1 != n) continue;
    samples.push_back({t.samples[i].r, t.samples[i].u, t.samples[i].up});
  }
  j["samples"] = std::move(samples);

  nlohmann::json events = nlohmann::json::array();
  for (const Event& e : t.events) {
    nlohmann::json je = {{"kind", event_kind_name(e.kind)},
                         {"r", e.r},
                         {"u", e.u},
                         {"up", e.up}};
    if (e.cause) je["cause"] = termination_name(*e.cause);
    events.push_back(std::move(je));
  }
  j["events"] = std::move(events);

  nlohmann::json diag;
  diag["sup_norm"] = t.sup_norm;
  diag["decayed"] = t.decayed;
  diag["termination"] = termination_name(t.termination);
  diag["zero_count"] = sum.zero_count;
  diag["critical_point_count"] = sum.critical_count;
  diag["gradient_sup"] = sum.gradient_sup;
  if (sum.max_identity_residual)
    diag["max_identity_residual"] = *sum.max_identity_residual;
  if (sum.max_z_uptick) diag["max_z_uptick"] = *sum.max_z_uptick;
  j["diagnostics"] = std::move(diag);
  return j;
}

TrajectoryFile parse_trajectory_csv(std::istream& in) {
  TrajectoryFile file;
  enum class Section { Header, Samples, Events, Diagnostics };
  Section section = Section::Header;
  std::string line;
  bool skip_column_row = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      const std::string body = line.substr(line.find_first_not_of("# "));
      if (body == "samples") {
        section = Section::Samples;
        skip_column_row = true;
      } else if (body == "events") {
        section = Section::Events;
        skip_column_row = true;
      } else if (body == "diagnostics") {
        section = Section::Diagnostics;
        skip_column_row = true;
      } else {
        const auto eq = body.find('=');
        if (eq != std::string::npos)
          file.metadata[body.substr(0, eq)] = body.substr(eq + 1);
      }
      continue;
    }
    if (skip_column_row) {
      skip_column_row = false;
      continue;
    }
    const auto cols = split(line, ',');
    switch (section) {
      case Section::Header:
        break;
      case Section::Samples:
        if (cols.size() == 3)
          file.samples.push_back(
              {parse_num(cols[0]), parse_num(cols[1]), parse_num(cols[2])});
        break;
      case Section::Events:
        if (cols.size() == 5) {
          Event e;
          e.kind = parse_event_kind(cols[0]);
          e.r = parse_num(cols[1]);
          e.u = parse_num(cols[2]);
          e.up = parse_num(cols[3]);
          if (!cols[4].empty()) e.cause = parse_termination(cols[4]);
          file.events.push_back(e);
        }
        break;
      case Section::Diagnostics:
        if (cols.size() == 2) file.diagnostics[cols[0]] = cols[1];
        break;
    }
  }
  if (auto it = file.diagnostics.find("sup_norm"); it != file.diagnostics.end())
    file.sup_norm = parse_num(it->second);
  return file;
}

namespace {

// Result-defining configuration echo. Worker count and wall time stay out:
// outputs must be byte-identical across worker counts.
nlohmann::json sweep_config_echo(const SweepSpec& spec) {
  nlohmann::json j;
  auto signs = nlohmann::json::array();
  for (auto s : spec.signs) signs.push_back(sign_name(s));
  j["signs"] = std::move(signs);
  j["dimensions"] = spec.dimensions;
  auto nls = nlohmann::json::array();
  for (const auto& nl : spec.nonlinearities) nls.push_back(nl.label);
  j["nonlinearities"] = std::move(nls);
  j["xi_grid"] = spec.xi_grid;
  j["controls"] = controls_to_json(spec.controls);
  return j;
}

std::string sanitize(const std::string& s) {
  std::string out = s;
  std::replace(out.begin(), out.end(), ',', ';');
  return out;
}

}  // namespace

std::string sweep_csv(const SweepSpec& spec, const SweepResult& result) {
  std::ostringstream os;
  os << "# pmc sweep\n"
     << "# schema_version=" << kSchemaVersion << "\n"
     << "# tool_version=" << kVersion << "\n"
     << "# config=" << sweep_config_echo(spec).dump() << "\n";
  os << "sign,dimension,g,xi,predicted,observed,agree,termination,zero_count,"
        "critical_count,period,period_spread,sup_norm,gradient_sup,"
        "energy_residual,max_z_uptick,decayed,anomaly,stalled,note\n";
  for (const SweepCell& c : result.cells) {
    const Evidence& ev = c.report.evidence;
    os << sign_name(c.sign) << ',' << c.dimension << ',' << c.g_label << ','
       << format_double(c.xi) << ',' << regime_name(c.report.predicted) << ','
       << regime_name(c.report.observed) << ',' << (c.report.agree ? 1 : 0)
       << ',' << termination_name(ev.termination) << ',' << ev.zero_count
       << ',' << ev.critical_count << ','
       << (ev.period ? format_double(*ev.period) : std::string()) << ','
       << format_double(ev.period_spread) << ',' << format_double(ev.sup_norm)
       << ',' << format_double(ev.gradient_sup) << ','
       << (c.energy_residual ? format_double(*c.energy_residual)
                             : std::string())
       << ','
       << (c.max_z_uptick ? format_double(*c.max_z_uptick) : std::string())
       << ',' << (ev.decayed ? 1 : 0) << ',' << (ev.anomaly ? 1 : 0) << ','
       << (c.stalled ? 1 : 0) << ',' << sanitize(ev.note) << "\n";
  }
  os << "# summary\n";
  os << "cells," << result.cells.size() << "\n";
  os << "disagreements," << result.disagreement_indices.size() << "\n";
  return os.str();
}

nlohmann::json sweep_json(const SweepSpec& spec, const SweepResult& result) {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["tool_version"] = kVersion;
  j["config"] = sweep_config_echo(spec);
  auto cells = nlohmann::json::array();
  for (const SweepCell& c : result.cells) {
    nlohmann::json jc;
    jc["sign"] = sign_name(c.sign);
    jc["dimension"] = c.dimension;
    jc["g"] = c.g_label;
    jc["xi"] = c.xi;
    jc["predicted"] = regime_name(c.report.predicted);
    jc["observed"] = regime_name(c.report.observed);
    jc["agree"] = c.report.agree;
    jc["evidence"] = evidence_json(c.report.evidence);
    if (c.energy_residual) jc["energy_residual"] = *c.energy_residual;
    if (c.max_z_uptick) jc["max_z_uptick"] = *c.max_z_uptick;
    if (c.stalled) {
      jc["stalled"] = true;
      jc["error"] = c.error;
    }
    cells.push_back(std::move(jc));
  }
  j["cells"] = std::move(cells);
  j["disagreements"] = result.disagreement_indices;
  j["summary"] = {{"cells", result.cells.size()},
                  {"disagreements", result.disagreement_indices.size()}};
  return j;
}

nlohmann::json classification_json(const Problem& problem,
                                   const IntegrationControls& controls,
                                   const ClassificationReport& report) {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["tool_version"] = kVersion;
  j["config"] = {{"sign", sign_name(problem.sign)},
                 {"dimension", problem.dimension},
                 {"g", problem.nonlinearity.label},
                 {"xi", problem.xi},
                 {"controls", controls_to_json(controls)}};
  j["predicted"] = regime_name(report.predicted);
  j["observed"] = regime_name(report.observed);
  j["agree"] = report.agree;
  j["evidence"] = evidence_json(report.evidence);
  return j;
}

std::string classification_csv(const Problem& problem,
                               const IntegrationControls& controls,
                               const ClassificationReport& report) {
  const Evidence& ev = report.evidence;
  std::ostringstream os;
  os << "# pmc classification\n"
     << "# schema_version=" << kSchemaVersion << "\n"
     << "# tool_version=" << kVersion << "\n";
  controls_to_csv(os, controls);
  os << "key,value\n"
     << "sign," << sign_name(problem.sign) << "\n"
     << "dimension," << problem.dimension << "\n"
     << "g," << problem.nonlinearity.label << "\n"
     << "xi," << format_double(problem.xi) << "\n"
     << "predicted," << regime_name(report.predicted) << "\n"
     << "observed," << regime_name(report.observed) << "\n"
     << "agree," << (report.agree ? 1 : 0) << "\n"
     << "termination," << termination_name(ev.termination) << "\n"
     << "zero_count," << ev.zero_count << "\n"
     << "critical_count," << ev.critical_count << "\n"
     << "period," << (ev.period ? format_double(*ev.period) : std::string())
     << "\n"
     << "period_spread," << format_double(ev.period_spread) << "\n"
     << "sup_norm," << format_double(ev.sup_norm) << "\n"
     << "gradient_sup," << format_double(ev.gradient_sup) << "\n"
     << "decayed," << (ev.decayed ? 1 : 0) << "\n"
     << "anomaly," << (ev.anomaly ? 1 : 0) << "\n"
     << "note," << sanitize(ev.note) << "\n";
  return os.str();
}

nlohmann::json validation_json(const Nonlinearity& spec, int sample_count,
                               double range, const ValidationReport& report) {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["tool_version"] = kVersion;
  j["config"] = {{"g", spec.label},
                 {"sample_count", sample_count},
                 {"range", range}};
  j["g"] = spec.label;
  auto checks = nlohmann::json::array();
  for (const auto& c : report.checks)
    checks.push_back({{"hypothesis", c.hypothesis},
                      {"passed", c.passed},
                      {"detail", c.detail}});
  j["checks"] = std::move(checks);
  j["evaluation_failures"] = report.evaluation_failures;
  j["all_passed"] = report.all_passed();
  return j;
}

std::string validation_csv(const Nonlinearity& spec, int sample_count,
                           double range, const ValidationReport& report) {
  std::ostringstream os;
  os << "# pmc validation\n"
     << "# schema_version=" << kSchemaVersion << "\n"
     << "# tool_version=" << kVersion << "\n"
     << "# g=" << spec.label << "\n"
     << "# sample_count=" << sample_count << "\n"
     << "# range=" << format_double(range) << "\n"
     << "hypothesis,passed,detail\n";
  for (const auto& c : report.checks)
    os << c.hypothesis << ',' << (c.passed ? 1 : 0) << ','
       << sanitize(c.detail) << "\n";
  os << "all_passed," << (report.all_passed() ? 1 : 0) << ",\n";
  return os.str();
}

SweepSpec parse_sweep_config(const nlohmann::json& config,
                             int default_workers) {
  if (!config.is_object())
    throw std::invalid_argument("sweep config: top level must be an object");
  for (const auto& [key, value] : config.items()) {
    (void)value;
    static const char* known[] = {"signs",      "dimensions", "nonlinearities",
                                  "xi_grid",    "controls",   "worker_count",
                                  "schema_version"};
    if (std::none_of(std::begin(known), std::end(known),
                     [&key](const char* k) { return key == k; }))
      throw std::invalid_argument("sweep config: unknown key '" + key + "'");
  }

  SweepSpec spec;
  spec.worker_count = default_workers;

  if (!config.contains("signs"))
    throw std::invalid_argument("sweep config: missing key 'signs'");
  for (const auto& s : config.at("signs"))
    spec.signs.push_back(parse_sign(s.get<std::string>()));

  if (!config.contains("dimensions"))
    throw std::invalid_argument("sweep config: missing key 'dimensions'");
  spec.dimensions = config.at("dimensions").get<std::vector<int>>();

  if (!config.contains("nonlinearities"))
    throw std::invalid_argument("sweep config: missing key 'nonlinearities'");
  for (const auto& item : config.at("nonlinearities")) {
    if (item.is_string()) {
      spec.nonlinearities.push_back(make_nonlinearity(item.get<std::string>()));
    } else if (item.is_object()) {
      if (!item.contains("kind"))
        throw std::invalid_argument(
            "sweep config: nonlinearity entry missing key 'kind'");
      const double lambda = item.value("lambda", 1.0);
      spec.nonlinearities.push_back(
          make_nonlinearity(item.at("kind").get<std::string>(), lambda));
    } else {
      throw std::invalid_argument(
          "sweep config: nonlinearity entries must be strings or objects");
    }
  }

  if (!config.contains("xi_grid"))
    throw std::invalid_argument("sweep config: missing key 'xi_grid'");
  const auto& grid = config.at("xi_grid");
  if (grid.is_array()) {
    spec.xi_grid = grid.get<std::vector<double>>();
  } else if (grid.is_object()) {
    for (const auto& [key, value] : grid.items()) {
      (void)value;
      if (key != "min" && key != "max" && key != "count")
        throw std::invalid_argument("sweep config: unknown xi_grid key '" +
                                    key + "'");
    }
    spec.xi_grid = make_linear_grid(grid.at("min").get<double>(),
                                    grid.at("max").get<double>(),
                                    grid.at("count").get<int>());
  } else {
    throw std::invalid_argument(
        "sweep config: xi_grid must be an array or {min,max,count}");
  }

  if (config.contains("controls")) {
    const auto& jc = config.at("controls");
    IntegrationControls& c = spec.controls;
    for (const auto& [key, value] : jc.items()) {
      if (key == "rel_tol") c.rel_tol = value.get<double>();
      else if (key == "abs_tol") c.abs_tol = value.get<double>();
      else if (key == "r_max") c.r_max = value.get<double>();
      else if (key == "max_events") c.max_events = value.get<int>();
      else if (key == "up_blowup_threshold")
        c.up_blowup_threshold = value.get<double>();
      else if (key == "lorentz_margin") c.lorentz_margin = value.get<double>();
      else if (key == "u_divergence_threshold")
        c.u_divergence_threshold = value.get<double>();
      else if (key == "event_r_tol") c.event_r_tol = value.get<double>();
      else if (key == "origin_delta") c.origin_delta = value.get<double>();
      else
        throw std::invalid_argument("sweep config: unknown controls key '" +
                                    key + "'");
    }
  }

  if (config.contains("worker_count"))
    spec.worker_count = config.at("worker_count").get<int>();

  return spec;
}

}  // namespace pmc::io
