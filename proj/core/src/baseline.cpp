#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rannlr/bench.hpp"

namespace rannlr {

RunReport baseline_primal_dual(const ProblemInstance& p, long steps, double step,
                               Xoshiro256ss& rng, const std::vector<double>& x0) {
  (void)rng;  // the iteration is deterministic; kept for interface uniformity
  using clock = std::chrono::steady_clock;
  if (steps < 1) throw std::invalid_argument("need at least one iteration");
  if (!(step > 0.0)) throw std::invalid_argument("step size must be positive");
  if (!x0.empty() && x0.size() != p.n) throw std::invalid_argument("x0 has wrong dimension");

  std::vector<double> x;
  if (x0.empty()) {
    x.resize(p.n);
    for (std::size_t j = 0; j < p.n; ++j) x[j] = 0.5 * (p.box.lo[j] + p.box.hi[j]);
  } else {
    x = project_box(x0, p.box);
  }
  std::vector<double> lambda(p.m, 0.0);
  std::vector<double> grad(p.n), gi_grad(p.n), g(p.m);

  RunReport report;
  report.algorithm = "baseline (reimplementation)";
  report.config.K = steps;
  report.config.subroutine.kind = SubroutineKind::full_gradient;
  report.config.subroutine.constant_step = step;
  report.reference_optimum = p.reference_optimum;

  const long stride = std::max(1L, steps / 200);
  const auto start_time = clock::now();
  auto last_row_time = start_time;

  for (long t = 0; t < steps; ++t) {
    p.objective_grad(x, grad);
    for (std::size_t i = 0; i < p.m; ++i) {
      if (lambda[i] == 0.0) continue;
      p.constraint_grad(i, x, gi_grad);
      for (std::size_t j = 0; j < p.n; ++j) grad[j] -= lambda[i] * gi_grad[j];
    }
    for (std::size_t j = 0; j < p.n; ++j) {
      x[j] = std::min(std::max(x[j] - step * grad[j], p.box.lo[j]), p.box.hi[j]);
      if (!std::isfinite(x[j]))
        throw SolverAbort("baseline diverged at iteration " + std::to_string(t));
    }
    p.constraint_values(x, g);
    double lmin = std::numeric_limits<double>::infinity(), lmax = 0.0, l1 = 0.0;
    for (std::size_t i = 0; i < p.m; ++i) {
      lambda[i] = std::max(0.0, lambda[i] - step * g[i]);
      lmin = std::min(lmin, lambda[i]);
      lmax = std::max(lmax, lambda[i]);
      l1 += lambda[i];
    }

    if ((t + 1) % stride == 0 || t + 1 == steps) {
      IterationRow row;
      row.k = t;
      row.f = p.objective(x);
      double viol = 0.0;
      for (double gi : g) viol = std::max(viol, -gi);
      row.max_violation = std::max(0.0, viol);
      // projected stationarity of the primal step at the current duals
      p.objective_grad(x, grad);
      for (std::size_t i = 0; i < p.m; ++i) {
        if (lambda[i] == 0.0) continue;
        p.constraint_grad(i, x, gi_grad);
        for (std::size_t j = 0; j < p.n; ++j) grad[j] -= lambda[i] * gi_grad[j];
      }
      double stat = 0.0;
      for (std::size_t j = 0; j < p.n; ++j) {
        const double stepped = std::min(std::max(x[j] - grad[j], p.box.lo[j]), p.box.hi[j]);
        stat = std::max(stat, std::fabs(x[j] - stepped));
      }
      row.stationarity = stat;
      row.inner_iters = 1;
      row.cum_inner_iters = t + 1;
      row.lambda_min = lmin;
      row.lambda_max = lmax;
      row.lambda_l1 = l1;
      const auto now = clock::now();
      row.wall_ms = std::chrono::duration<double, std::milli>(now - last_row_time).count();
      last_row_time = now;
      report.rows.push_back(row);
    }
  }

  report.final_x = x;
  report.final_objective = p.objective(x);
  if (report.reference_optimum) {
    const double ref = *report.reference_optimum;
    report.final_relative_gap = std::fabs(report.final_objective - ref) / std::fabs(ref);
  }
  report.solve_ms =
      std::chrono::duration<double, std::milli>(clock::now() - start_time).count();
  return report;
}

}  // namespace rannlr
