#include "rannlr/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

namespace rannlr {

DualState dual_update(const DualState& d, const std::vector<double>& x, const ProblemInstance& p,
                      const RescalingFunction& psi_fn, double N) {
  if (!(N > 0.0)) throw std::invalid_argument("scaling parameter N must be positive");
  std::vector<double> lam(p.m);
  constexpr double floor = std::numeric_limits<double>::min();
  for (std::size_t i = 0; i < p.m; ++i) {
    const double gi = p.constraint(i, x);
    if (!std::isfinite(gi)) throw EvalError("non-finite constraint value", i);
    const double mult = psi_d1(psi_fn, N * gi);
    // mult == 0 is exponent underflow of a mathematically positive psi'; the
    // floor below keeps the dual positive in that case
    if (!std::isfinite(mult) || mult < 0.0)
      throw EvalError("dual multiplier must be positive and finite", i);
    lam[i] = std::max(d.lambda[i] * mult, floor);
  }
  return DualState::from(std::move(lam));
}

long outer_iterations_for(double target_eps, double N, double c_R, double lambda_gap) {
  if (!(c_R > 0.0) || !(N > c_R))
    throw std::invalid_argument("requires N > c_R > 0");
  if (!(target_eps > 0.0) || !(lambda_gap > 0.0))
    throw std::invalid_argument("tolerance and dual gap must be positive");
  const double k = std::ceil(std::log(2.0 * lambda_gap / target_eps) / std::log(N / c_R));
  return std::max(1L, static_cast<long>(k));
}

double inner_eps_for(double target_eps, double N, double c_R, double C_Phi) {
  if (!(c_R > 0.0) || !(N > c_R)) throw std::invalid_argument("requires N > c_R > 0");
  if (!(C_Phi > 0.0)) throw std::invalid_argument("C_Phi must be positive");
  if (!(target_eps > 0.0)) throw std::invalid_argument("tolerance must be positive");
  return (1.0 - c_R / N) * target_eps / (4.0 * C_Phi);
}

long theory_budget(long k, long K, double eps, double delta, const TheoryConstants& c,
                   RateKind rate_kind, double N, double L, std::size_t n) {
  if (k < 0 || K < 1) throw std::invalid_argument("bad iteration indices");
  if (!(eps > 0.0)) throw std::invalid_argument("tolerance must be positive");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0,1)");
  if (!(N > 0.0) || !(L > 0.0) || n == 0) throw std::invalid_argument("bad N, L, or n");
  const double rho = c.c_R / N;
  if (k >= 1 && !(rho < 1.0))
    throw std::invalid_argument("later-iteration budgets require N > c_R");

  const double fail = 1.0 - std::pow(1.0 - delta, 1.0 / static_cast<double>(K));
  const double denom = fail * eps * eps;
  const double nd = static_cast<double>(n);

  double numer;
  if (k == 0) {
    const double dist = c.x0_star_gap * c.x0_star_gap +
                        rho * rho * c.lambda_star_gap * c.lambda_star_gap;
    numer = rate_kind == RateKind::sublinear ? L * L * (nd * c.A * dist + c.B)
                                             : nd * c.zeta * L * L * dist;
  } else {
    const double drift = 2.0 * c.C_Phi * eps / (1.0 - rho) +
                         std::pow(rho, static_cast<double>(k)) * c.lambda_star_gap;
    const double dist = (1.0 + rho * rho) * drift * drift;
    numer = rate_kind == RateKind::sublinear ? L * L * (nd * c.A * dist + c.B)
                                             : nd * c.zeta * L * L * dist;
  }

  double budget;
  if (rate_kind == RateKind::sublinear) {
    budget = std::ceil(numer / denom);
  } else {
    if (!(c.alpha > 0.0 && c.alpha < 1.0))
      throw std::invalid_argument("linear budgets need alpha in (0,1)");
    budget = std::ceil(std::log(numer / denom) / std::log(1.0 / c.alpha));
  }
  if (!std::isfinite(budget)) throw std::invalid_argument("degenerate theory budget");
  return std::max(1L, static_cast<long>(budget));
}

RunReport solve(const ProblemInstance& p, const RescalingFunction& psi_fn,
                const SolverConfig& cfg, const SolveObserver& observer) {
  using clock = std::chrono::steady_clock;
  if (!(cfg.N > 0.0) || !std::isfinite(cfg.N))
    throw std::invalid_argument("scaling parameter N must be positive");
  if (!(cfg.eps > 0.0)) throw std::invalid_argument("inner tolerance must be positive");
  if (!(cfg.delta > 0.0 && cfg.delta < 1.0))
    throw std::invalid_argument("delta must lie in (0,1)");
  if (!cfg.lambda0.empty() && cfg.lambda0.size() != p.m)
    throw std::invalid_argument("lambda0 has wrong dimension");
  if (!cfg.x0.empty() && cfg.x0.size() != p.n)
    throw std::invalid_argument("x0 has wrong dimension");

  const bool theory = cfg.budget_mode == BudgetMode::theory;
  if (theory && !cfg.theory_constants)
    throw std::invalid_argument("theory budget mode requires the analysis constants");

  long K;
  if (cfg.K) {
    if (*cfg.K < 0) throw std::invalid_argument("negative outer iteration count");
    K = *cfg.K;
  } else {
    if (!cfg.theory_constants)
      throw std::invalid_argument("deriving K requires the analysis constants");
    K = outer_iterations_for(cfg.target_eps, cfg.N, cfg.theory_constants->c_R,
                             cfg.theory_constants->lambda_star_gap);
  }

  DualState dual = cfg.lambda0.empty() ? DualState::from(std::vector<double>(p.m, 1.0))
                                       : DualState::from(cfg.lambda0);
  std::vector<double> x;
  if (cfg.x0.empty()) {
    x.resize(p.n);
    for (std::size_t j = 0; j < p.n; ++j) x[j] = 0.5 * (p.box.lo[j] + p.box.hi[j]);
  } else {
    x = project_box(cfg.x0, p.box);
  }

  RunReport report;
  switch (cfg.subroutine.kind) {
    case SubroutineKind::sgd: report.algorithm = "RanNLR-SGD"; break;
    case SubroutineKind::svrg: report.algorithm = "RanNLR-SVRG"; break;
    case SubroutineKind::full_gradient: report.algorithm = "RanNLR-Full"; break;
  }
  report.config = cfg;
  report.seed = cfg.master_seed;
  report.reference_optimum = p.reference_optimum;
  report.rows.reserve(static_cast<std::size_t>(K));

  const auto solve_start = clock::now();
  long cum_inner = 0;
  int consecutive_stalls = 0;

  for (long k = 0; k < K; ++k) {
    const auto iter_start = clock::now();
    Xoshiro256ss rng(stream_seed(cfg.master_seed, static_cast<std::uint64_t>(k)));

    SubroutineSpec spec = cfg.subroutine;
    double eps_inner = cfg.eps;
    double eps_run = cfg.eps;
    if (theory && spec.kind != SubroutineKind::full_gradient) {
      const TheoryConstants& tc = *cfg.theory_constants;
      eps_inner = inner_eps_for(cfg.target_eps, cfg.N, tc.c_R, tc.C_Phi);
      const RateKind rate =
          spec.kind == SubroutineKind::sgd ? RateKind::sublinear : RateKind::linear;
      spec.max_inner_iters =
          theory_budget(k, K, eps_inner, cfg.delta, tc, rate, cfg.N, p.lipschitz_grad, p.n);
      eps_run = 0.0;  // run the budget exactly, record the achieved norm
    }

    InnerResult res = run_inner(p, psi_fn, dual, cfg.N, spec, x, eps_run, rng);
    x = std::move(res.x);
    cum_inner += res.inner_iters;

    if (!theory && res.achieved > 10.0 * eps_inner && res.inner_iters >= spec.max_inner_iters) {
      if (++consecutive_stalls >= 3)
        throw SolverAbort("inner solver stalled at outer iteration " + std::to_string(k) +
                          ": achieved " + std::to_string(res.achieved) + " vs tolerance " +
                          std::to_string(eps_inner) +
                          "; check the step size and Lipschitz bound");
    } else {
      consecutive_stalls = 0;
    }

    dual = dual_update(dual, x, p, psi_fn, cfg.N);

    IterationRow row;
    row.k = k;
    row.f = p.objective(x);
    row.max_violation = max_violation(p, x).value;
    row.stationarity = res.achieved;
    row.inner_iters = res.inner_iters;
    row.cum_inner_iters = cum_inner;
    const auto [mn, mx] = std::minmax_element(dual.lambda.begin(), dual.lambda.end());
    row.lambda_min = *mn;
    row.lambda_max = *mx;
    row.lambda_l1 = dual.l1_norm;
    row.wall_ms =
        std::chrono::duration<double, std::milli>(clock::now() - iter_start).count();
    report.rows.push_back(row);

    if (observer) observer(k + 1, x, dual);
  }

  report.final_x = x;
  report.final_objective = p.objective(x);
  if (report.reference_optimum) {
    const double ref = *report.reference_optimum;
    report.final_relative_gap = std::fabs(report.final_objective - ref) / std::fabs(ref);
  }
  report.solve_ms =
      std::chrono::duration<double, std::milli>(clock::now() - solve_start).count();
  return report;
}

}  // namespace rannlr
