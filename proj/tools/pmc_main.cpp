// pmc: command-line front end for the radial mean curvature laboratory.
//
// Subcommands:
//   trajectory  integrate one Cauchy problem and write samples/events
//   classify    predicted vs observed regime for one problem
//   validate    hypothesis report for a nonlinearity
//   sweep       classification over a (sign, N, g, xi) grid from a config
//
// Exit codes: 0 success, 1 error, 2 sweep finished with disagreements.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "pmc/classifier.hpp"
#include "pmc/io.hpp"
#include "pmc/sweep.hpp"
#include "pmc/version.hpp"

namespace {

struct ProblemFlags {
  std::string sign = "euclidean";
  int dimension = 1;
  std::string g_kind = "sin";
  double lambda = 1.0;
  double xi = 0.0;
};

struct ControlFlags {
  pmc::IntegrationControls controls;
  double divergence_threshold = 0.0;  // 0 keeps the automatic default
};

void add_problem_flags(CLI::App* cmd, ProblemFlags& p, bool with_xi = true) {
  cmd->add_option("--sign", p.sign, "curvature sign: euclidean|lorentz")
      ->required();
  cmd->add_option("--dim", p.dimension, "dimension N >= 1")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--g", p.g_kind, "nonlinearity: sin|cubic|linear|saturating");
  cmd->add_option("--lambda", p.lambda, "slope for --g linear");
  if (with_xi)
    cmd->add_option("--xi", p.xi, "initial height u(0)")->required();
}

void add_control_flags(CLI::App* cmd, ControlFlags& c) {
  cmd->add_option("--rtol", c.controls.rel_tol, "relative tolerance");
  cmd->add_option("--atol", c.controls.abs_tol, "absolute tolerance");
  cmd->add_option("--rmax", c.controls.r_max, "integration horizon");
  cmd->add_option("--max-events", c.controls.max_events, "event budget");
  cmd->add_option("--blowup-threshold", c.controls.up_blowup_threshold,
                  "|u'| gradient blow-up threshold (Euclidean)");
  cmd->add_option("--lorentz-margin", c.controls.lorentz_margin,
                  "light-cone margin");
  cmd->add_option("--divergence-threshold", c.divergence_threshold,
                  "|u| height divergence threshold (0 = automatic)");
  cmd->add_option("--event-rtol", c.controls.event_r_tol,
                  "event bisection width");
  cmd->add_option("--origin-delta", c.controls.origin_delta,
                  "Taylor start radius");
}

pmc::Problem build_problem(const ProblemFlags& p) {
  pmc::Problem problem;
  problem.sign = pmc::io::parse_sign(p.sign);
  problem.dimension = p.dimension;
  problem.xi = p.xi;
  problem.nonlinearity = pmc::make_nonlinearity(p.g_kind, p.lambda);
  return problem;
}

pmc::IntegrationControls build_controls(const ControlFlags& c) {
  pmc::IntegrationControls controls = c.controls;
  if (c.divergence_threshold > 0.0)
    controls.u_divergence_threshold = c.divergence_threshold;
  return controls;
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output path '" + path + "'");
  out << content;
  if (!out.good())
    throw std::runtime_error("failed writing output path '" + path + "'");
}

int default_worker_count() {
  if (const char* env = std::getenv("PMC_WORKERS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pmc: numerical laboratory for radial prescribed mean "
               "curvature equations"};
  app.set_version_flag("--version", pmc::kVersion);
  app.require_subcommand(1);

  ProblemFlags traj_p, cls_p;
  ControlFlags traj_c, cls_c;
  std::string traj_out, traj_format = "csv";
  int traj_stride = 1;
  auto* traj = app.add_subcommand("trajectory", "integrate one problem");
  add_problem_flags(traj, traj_p);
  add_control_flags(traj, traj_c);
  traj->add_option("--out", traj_out, "output path (default stdout)");
  traj->add_option("--format", traj_format, "csv|json");
  traj->add_option("--stride", traj_stride, "sample thinning stride")
      ->check(CLI::PositiveNumber);

  std::string cls_out, cls_format = "json";
  auto* cls = app.add_subcommand("classify", "classify one problem");
  add_problem_flags(cls, cls_p);
  add_control_flags(cls, cls_c);
  cls->add_option("--out", cls_out, "output path (default stdout)");
  cls->add_option("--format", cls_format, "csv|json");

  std::string val_g = "sin", val_out, val_format = "json";
  double val_lambda = 1.0, val_range = 4.0;
  int val_samples = 256;
  auto* val = app.add_subcommand("validate", "check the (g1)-(g4) hypotheses");
  val->add_option("--g", val_g, "nonlinearity: sin|cubic|linear|saturating");
  val->add_option("--lambda", val_lambda, "slope for --g linear");
  val->add_option("--samples", val_samples, "sample count (>= 16)");
  val->add_option("--range", val_range, "sampling half-range");
  val->add_option("--out", val_out, "output path (default stdout)");
  val->add_option("--format", val_format, "csv|json");

  std::string sweep_config, sweep_out, sweep_format = "csv";
  int sweep_workers = 0;
  auto* swp = app.add_subcommand("sweep", "run a classification sweep");
  swp->add_option("--config", sweep_config, "JSON sweep configuration")
      ->required();
  swp->add_option("--out", sweep_out, "output path (default stdout)");
  swp->add_option("--format", sweep_format, "csv|json");
  swp->add_option("--workers", sweep_workers,
                  "worker threads (default: PMC_WORKERS or 1)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "pmc: " << e.what() << "\n";
    return 1;
  }

  try {
    if (traj->parsed()) {
      const pmc::Problem problem = build_problem(traj_p);
      const pmc::Trajectory t =
          pmc::integrate(problem, build_controls(traj_c));
      if (traj_format == "csv")
        write_output(traj_out, pmc::io::trajectory_csv(t, traj_stride));
      else if (traj_format == "json")
        write_output(traj_out,
                     pmc::io::trajectory_json(t, traj_stride).dump(2) + "\n");
      else
        throw std::runtime_error("unknown format '" + traj_format + "'");
      return 0;
    }

    if (cls->parsed()) {
      const pmc::Problem problem = build_problem(cls_p);
      const pmc::ClassificationReport rep =
          pmc::classify(problem, build_controls(cls_c));
      const pmc::IntegrationControls effective = build_controls(cls_c);
      if (cls_format == "csv")
        write_output(cls_out,
                     pmc::io::classification_csv(problem, effective, rep));
      else if (cls_format == "json")
        write_output(
            cls_out,
            pmc::io::classification_json(problem, effective, rep).dump(2) +
                "\n");
      else
        throw std::runtime_error("unknown format '" + cls_format + "'");
      return 0;
    }

    if (val->parsed()) {
      const pmc::Nonlinearity nl = pmc::make_nonlinearity(val_g, val_lambda);
      const pmc::ValidationReport rep =
          pmc::validate(nl, val_samples, val_range);
      if (val_format == "csv")
        write_output(val_out,
                     pmc::io::validation_csv(nl, val_samples, val_range, rep));
      else if (val_format == "json")
        write_output(val_out,
                     pmc::io::validation_json(nl, val_samples, val_range, rep)
                             .dump(2) +
                         "\n");
      else
        throw std::runtime_error("unknown format '" + val_format + "'");
      return 0;
    }

    if (swp->parsed()) {
      std::ifstream in(sweep_config);
      if (!in)
        throw std::runtime_error("cannot open config '" + sweep_config + "'");
      nlohmann::json config;
      in >> config;
      pmc::SweepSpec spec =
          pmc::io::parse_sweep_config(config, default_worker_count());
      if (sweep_workers >= 1) spec.worker_count = sweep_workers;
      const pmc::SweepResult result = pmc::run_sweep(spec);
      if (sweep_format == "csv")
        write_output(sweep_out, pmc::io::sweep_csv(spec, result));
      else if (sweep_format == "json")
        write_output(sweep_out,
                     pmc::io::sweep_json(spec, result).dump(2) + "\n");
      else
        throw std::runtime_error("unknown format '" + sweep_format + "'");
      return result.disagreement_indices.empty() ? 0 : 2;
    }
  } catch (const std::exception& e) {
    std::cerr << "pmc: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
