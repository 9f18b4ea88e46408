#include "pmc/sweep.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "pmc/diagnostics.hpp"

namespace pmc {

std::vector<double> make_linear_grid(double min, double max, int count) {
  if (count < 1)
    throw std::invalid_argument("make_linear_grid: count must be >= 1");
  if (count == 1) return {min};
  std::vector<double> g(count);
  for (int i = 0; i < count; ++i)
    g[i] = min + (max - min) * static_cast<double>(i) / (count - 1);
  return g;
}

namespace {

SweepCell evaluate_cell(CurvatureSign sign, int dimension,
                        const Nonlinearity& nl, double xi,
                        const IntegrationControls& controls) {
  SweepCell cell;
  cell.sign = sign;
  cell.dimension = dimension;
  cell.g_label = nl.label;
  cell.xi = xi;

  Problem problem{sign, dimension, xi, nl};
  cell.report.predicted = predict(problem);

  Trajectory traj;
  try {
    traj = integrate(problem, controls);
  } catch (const IntegrationStalled& e) {
    cell.stalled = true;
    cell.error = e.what();
    const Trajectory& partial = e.partial();
    cell.report.observed = Regime::OutsideTheory;
    cell.report.evidence.zero_count = partial.count(EventKind::Zero);
    cell.report.evidence.critical_count = partial.count(EventKind::CriticalPoint);
    cell.report.evidence.sup_norm = partial.sup_norm;
    cell.report.evidence.note = "integration stalled";
    cell.report.agree = regimes_agree(cell.report.predicted,
                                      cell.report.observed, sign,
                                      cell.report.evidence);
    return cell;
  }

  auto [observed, ev] = observe(traj);
  cell.report.observed = observed;
  cell.report.evidence = std::move(ev);
  cell.report.agree = regimes_agree(cell.report.predicted, observed, sign,
                                    cell.report.evidence);

  if (dimension == 1) {
    cell.energy_residual =
        energy_identity_residual(traj).max_identity_residual;
  } else {
    cell.max_z_uptick = lyapunov_profile(traj).max_z_uptick;
  }
  return cell;
}

}  // namespace

SweepResult run_sweep(const SweepSpec& spec) {
  if (spec.signs.empty())
    throw std::invalid_argument("run_sweep: empty signs list");
  if (spec.dimensions.empty())
    throw std::invalid_argument("run_sweep: empty dimensions list");
  if (spec.nonlinearities.empty())
    throw std::invalid_argument("run_sweep: empty nonlinearities list");
  if (spec.xi_grid.empty())
    throw std::invalid_argument("run_sweep: empty xi grid");
  for (int d : spec.dimensions)
    if (d < 1)
      throw std::invalid_argument("run_sweep: dimensions must be >= 1");
  for (double xi : spec.xi_grid)
    if (!std::isfinite(xi))
      throw std::invalid_argument("run_sweep: xi grid must be finite");

  struct CellIndex {
    CurvatureSign sign;
    int dimension;
    const Nonlinearity* nl;
    double xi;
  };
  std::vector<CellIndex> plan;
  plan.reserve(spec.signs.size() * spec.dimensions.size() *
               spec.nonlinearities.size() * spec.xi_grid.size());
  for (CurvatureSign sign : spec.signs)
    for (int dim : spec.dimensions)
      for (const Nonlinearity& nl : spec.nonlinearities)
        for (double xi : spec.xi_grid) plan.push_back({sign, dim, &nl, xi});

  const auto t0 = std::chrono::steady_clock::now();
  SweepResult result;
  result.cells.resize(plan.size());

  // One cell = one task; workers pull indices and write disjoint slots, so
  // the merged result is identical for any worker count.
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= plan.size()) return;
      const CellIndex& c = plan[i];
      result.cells[i] =
          evaluate_cell(c.sign, c.dimension, *c.nl, c.xi, spec.controls);
    }
  };

  const int workers = std::max(1, spec.worker_count);
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();

  for (std::size_t i = 0; i < result.cells.size(); ++i)
    if (!result.cells[i].report.agree) result.disagreement_indices.push_back(i);

  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return result;
}

}  // namespace pmc
