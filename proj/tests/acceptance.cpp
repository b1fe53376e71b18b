// Acceptance gate: runs the ten release criteria end to end and prints one
// PASS/FAIL line each. Exit status is the number of failed criteria, so ctest
// treats any red line as a failure of the whole binary.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "rannlr/bench.hpp"
#include "rannlr/solver.hpp"
#include "test_instances.hpp"

using namespace rannlr;
using testutil::QuadInstance;

namespace {

const RescalingFunction kPsi = make_extrapolated(RescalingKind::exp_extrapolated, -0.5);

struct Gate {
  int failures = 0;
  void run(int id, const std::function<std::pair<bool, std::string>()>& body) {
    bool ok = false;
    std::string detail;
    try {
      std::tie(ok, detail) = body();
    } catch (const std::exception& e) {
      ok = false;
      detail = std::string("unexpected exception: ") + e.what();
    }
    std::printf("criterion %2d: %s -- %s\n", id, ok ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
  }
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

RunReport run_sip_svrg(const SipInstance& p, double N, long M, long K,
                       std::uint64_t seed) {
  SolverConfig cfg;
  cfg.N = N;
  cfg.K = K;
  cfg.eps = 1e-4;
  cfg.target_eps = 1e-4;
  cfg.subroutine.kind = SubroutineKind::svrg;
  cfg.subroutine.constant_step = 1e-4;
  cfg.subroutine.epoch_length = M;
  cfg.subroutine.check_interval = 1000;
  cfg.subroutine.max_inner_iters = 200000;
  cfg.lambda0.assign(p.m, 1.0 / static_cast<double>(p.m));
  cfg.x0 = {0.0, 0.0};
  cfg.master_seed = seed;
  return solve(p, kPsi, cfg);
}

std::vector<double> random_simplex(Xoshiro256ss& rng, std::size_t m) {
  std::vector<double> v(m);
  double sum = 0.0;
  for (double& x : v) {
    x = 0.05 + rng.uniform();
    sum += x;
  }
  double partial = 0.0;
  for (std::size_t i = 0; i + 1 < m; ++i) {
    v[i] /= sum;
    partial += v[i];
  }
  v[m - 1] = 1.0 - partial;  // exact unit sum
  return v;
}

// mean-square distance to xstar at each svrg epoch boundary, averaged over
// seeded replicas; one generator per replica persists across epochs
std::vector<double> epoch_mean_squares(const QuadInstance& p, const DualState& d,
                                       SamplingSource src, StepMode mode, double gamma, long M,
                                       int epochs, int seeds, std::uint64_t seed_base,
                                       const std::vector<double>& xstar) {
  std::vector<double> ms(static_cast<std::size_t>(epochs) + 1, 0.0);
  SubroutineSpec spec;
  spec.kind = SubroutineKind::svrg;
  spec.step_mode = mode;
  spec.constant_step = gamma;
  spec.epoch_length = M;
  spec.max_inner_iters = M;
  spec.check_interval = M + 1;
  spec.sampling = src;
  for (int s = 0; s < seeds; ++s) {
    Xoshiro256ss rng(stream_seed(seed_base, static_cast<std::uint64_t>(s)));
    std::vector<double> x{2.5, 2.5};
    ms[0] += testutil::sq_dist(x, xstar);
    for (int e = 1; e <= epochs; ++e) {
      x = run_inner(p, kPsi, d, 1.0, spec, x, 0.0, rng).x;
      ms[static_cast<std::size_t>(e)] += testutil::sq_dist(x, xstar);
    }
  }
  for (double& v : ms) v /= seeds;
  return ms;
}

}  // namespace

int main() {
  Gate gate;
  const SipInstance sip = build_sip(10000);

  // Criterion 1: table-1 reproduction on the 10^4-constraint envelope
  // instance; both scalings reach a 0.1% gap within twice the published
  // outer-iteration counts.
  gate.run(1, [&]() -> std::pair<bool, std::string> {
    const RunReport a = run_sip_svrg(sip, 100.0, 20, 62, 1);
    const RunReport b = run_sip_svrg(sip, 1000.0, 400, 4, 1);
    const double ga = *a.final_relative_gap, gb = *b.final_relative_gap;
    const bool ok = ga < 1e-3 && gb < 1e-3;
    return {ok, "N=100: f=" + fmt(a.final_objective) + " gap=" + fmt(ga) +
                    " in K=62<=124 (" + fmt(a.solve_ms) + " ms); N=1000: f=" +
                    fmt(b.final_objective) + " gap=" + fmt(gb) + " in K=4<=8 (" +
                    fmt(b.solve_ms) + " ms)"};
  });

  // Criterion 2: builder oracle against the published optimum
  gate.run(2, [&]() -> std::pair<bool, std::string> {
    const bool ok =
        std::fabs(sip.x1_star - 0.20523677) <= 1e-6 && std::fabs(sip.f_star - 3.221) <= 1e-3;
    return {ok, "x1*=" + fmt(sip.x1_star) + " (ref 0.20523677 +- 1e-6), f*=" +
                    fmt(sip.f_star) + " (ref 3.221 +- 1e-3)"};
  });

  // Criterion 3: the primal-dual subgradient baseline lands within 1%, and
  // the variance-reduced solver beats it on both gap and wall time.
  gate.run(3, [&]() -> std::pair<bool, std::string> {
    Xoshiro256ss rng(1);
    const RunReport base = baseline_primal_dual(sip, 30000, 1e-4, rng, {0.0, 0.0});
    const RunReport ours = run_sip_svrg(sip, 100.0, 20, 62, 1);
    const double gb = *base.final_relative_gap, go = *ours.final_relative_gap;
    const bool ok = gb <= 0.01 && go < gb && ours.solve_ms < base.solve_ms;
    return {ok, "baseline: f=" + fmt(base.final_objective) + " gap=" + fmt(gb) + " in " +
                    fmt(base.solve_ms) + " ms; svrg: gap=" + fmt(go) + " in " +
                    fmt(ours.solve_ms) + " ms"};
  });

  // Criterion 4: desk-scale inventory program against the exact LP oracle,
  // both subroutines, 60 s budget each.
  gate.run(4, [&]() -> std::pair<bool, std::string> {
    AlpInstance alp = build_alp(0.2, 600.0);
    const LpReference ref = lp_reference(alp);
    alp.reference_optimum = -ref.value;

    // tolerance scaled down from the full-scale run's 1.0 so the desk
    // instance is solved to well past the 0.1% gate; the zero value function
    // is a strictly feasible start, which keeps the dual transit tame
    SolverConfig cfg;
    cfg.N = 1000.0;
    cfg.K = 60;
    cfg.eps = 0.12;
    cfg.subroutine.constant_step = 0.005;
    cfg.subroutine.check_interval = 500;
    cfg.subroutine.max_inner_iters = 200000;
    cfg.lambda0.assign(alp.m, 1.0 / static_cast<double>(alp.m));
    cfg.x0 = {0.0, 0.0};

    SolverConfig sgd = cfg;
    sgd.subroutine.kind = SubroutineKind::sgd;
    sgd.master_seed = 3;
    const RunReport rs = solve(alp, kPsi, sgd);

    SolverConfig svrg = cfg;
    svrg.subroutine.kind = SubroutineKind::svrg;
    svrg.subroutine.epoch_length = 1000;
    svrg.master_seed = 4;
    const RunReport rv = solve(alp, kPsi, svrg);

    const double gs = *rs.final_relative_gap, gv = *rv.final_relative_gap;
    const bool ok = gs <= 1e-3 && gv <= 1e-3 && rs.solve_ms < 60000.0 && rv.solve_ms < 60000.0;
    return {ok, "lp oracle theta1*=" + fmt(ref.value) + "; sgd: gap=" + fmt(gs) + " in " +
                    fmt(rs.solve_ms) + " ms; svrg: gap=" + fmt(gv) + " in " +
                    fmt(rv.solve_ms) + " ms (budget 60000 ms each)"};
  });

  // Criterion 5: variance-ratio inequality over fuzzed distribution pairs
  gate.run(5, [&]() -> std::pair<bool, std::string> {
    Xoshiro256ss rng(31);
    double worst_r = 2.0;
    for (int rep = 0; rep < 10000; ++rep) {
      const std::size_t m = 2 + static_cast<std::size_t>(rng.uniform() * 100);
      const std::vector<double> pv = random_simplex(rng, m);
      std::vector<double> qv = rep % 10 == 0 ? pv : random_simplex(rng, m);
      const SamplingDistribution pd = make_distribution(pv, SamplingSource::custom);
      const SamplingDistribution qd = make_distribution(qv, SamplingSource::custom);
      const double r = variance_ratio(pd, qd);
      worst_r = std::min(worst_r, r);
      if (r < 1.0 - 1e-12) return {false, "r below one: " + fmt(r)};
      double linf = 0.0;
      for (std::size_t i = 0; i < m; ++i) linf = std::max(linf, std::fabs(pv[i] - qv[i]));
      if (rep % 10 == 0 && std::fabs(r - 1.0) > 1e-12)
        return {false, "r != 1 at q = p: " + fmt(r)};
      if (linf > 1e-6 && !(r > 1.0 + 1e-12))
        return {false, "r not above one for distinct q (linf=" + fmt(linf) + ")"};
    }
    return {true, "10000 fuzzed pairs: r >= 1 with equality only at q = p (min r = " +
                      fmt(worst_r) + ")"};
  });

  // Criterion 6: estimator unbiasedness (exhaustive expectation) and the
  // conditional variance bound
  gate.run(6, [&]() -> std::pair<bool, std::string> {
    Xoshiro256ss rng(19);
    double worst_mean = 0.0, worst_margin = -1.0;
    for (int rep = 0; rep < 30; ++rep) {
      const std::size_t m = 2 + static_cast<std::size_t>(rng.uniform() * 48);
      const QuadInstance p = testutil::make_quad(rng, 3, m);
      std::vector<double> lam(m);
      for (double& v : lam) v = 0.1 + 2.0 * rng.uniform();
      const DualState d = DualState::from(lam);
      const SamplingDistribution q =
          rep % 2 == 0 ? uniform_distribution(m) : scaled_distribution(d);
      const double N = 0.5 + 2.0 * rng.uniform();

      std::vector<double> y(3);
      for (double& v : y) v = 4.0 * rng.uniform() - 2.0;
      std::vector<std::vector<double>> table(m, std::vector<double>(3));
      for (auto& row : table)
        for (double& v : row) v = 4.0 * rng.uniform() - 2.0;
      const EstimatorState st = make_table_state(table, q);
      const std::vector<double> g = grad_augmented_lagrangian(p, kPsi, y, d, N);

      const double L = testutil::component_lipschitz(p, d, N);
      const SamplingDistribution prop = scaled_distribution(d);
      const double r = variance_ratio(prop, q);
      const std::vector<double> xstar = testutil::minimize_al(p, kPsi, d, N, 1.0 / L);

      std::vector<double> mean(3, 0.0);
      double variance = 0.0, proxy_term = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        const std::vector<double> est = gradient_estimator(p, kPsi, y, st, i, d, q, N);
        const std::vector<double> ai = scaled_operator(p, kPsi, i, xstar, d, q, N);
        double dev = 0.0, proxy = 0.0;
        for (std::size_t j = 0; j < 3; ++j) {
          mean[j] += q.probs[i] * est[j];
          dev += (est[j] - g[j]) * (est[j] - g[j]);
          proxy += (table[i][j] - ai[j]) * (table[i][j] - ai[j]);
        }
        variance += q.probs[i] * dev;
        proxy_term += q.probs[i] * proxy;
      }
      for (std::size_t j = 0; j < 3; ++j)
        worst_mean = std::max(worst_mean, std::fabs(mean[j] - g[j]));
      const double bound =
          2.0 * (r * L * L * testutil::sq_dist(y, xstar) + proxy_term);
      worst_margin = std::max(worst_margin, variance - bound);
      if (worst_mean > 1e-10) return {false, "expectation error " + fmt(worst_mean)};
      if (worst_margin > 1e-9) return {false, "variance exceeds bound by " + fmt(worst_margin)};
    }
    return {true, "30 instances (m <= 50): max expectation error " + fmt(worst_mean) +
                      " <= 1e-10, max variance margin " + fmt(worst_margin) + " <= 1e-9"};
  });

  // Criterion 7: statistical rate checks on the fixed symmetric instance
  gate.run(7, [&]() -> std::pair<bool, std::string> {
    QuadInstance p = testutil::make_symmetric_2d();
    const DualState d = DualState::from({1.0, 1.0});
    const double L = testutil::component_lipschitz(p, d, 1.0);
    p.lipschitz_grad = L;
    const std::vector<double> origin{0.0, 0.0};

    // sgd: mean-square distance decays with log-log slope <= -0.8
    SubroutineSpec sgd;
    sgd.kind = SubroutineKind::sgd;
    sgd.step_mode = StepMode::theory;
    sgd.check_interval = 1000000;
    double ms_lo = 0.0, ms_hi = 0.0;
    const int seeds = 120;
    for (int s = 0; s < seeds; ++s) {
      sgd.max_inner_iters = 100;
      Xoshiro256ss r1(stream_seed(7100, static_cast<std::uint64_t>(s)));
      ms_lo += testutil::sq_dist(run_inner(p, kPsi, d, 1.0, sgd, {2.5, 2.5}, 0.0, r1).x, origin);
      sgd.max_inner_iters = 10000;
      Xoshiro256ss r2(stream_seed(7100, static_cast<std::uint64_t>(s)));
      ms_hi += testutil::sq_dist(run_inner(p, kPsi, d, 1.0, sgd, {2.5, 2.5}, 0.0, r2).x, origin);
    }
    ms_lo /= seeds;
    ms_hi /= seeds;
    const double slope = (std::log(ms_hi) - std::log(ms_lo)) / (std::log(1e4) - std::log(1e2));

    // svrg: per-epoch contraction of the mean-square distance at gamma*
    const double gamma = svrg_stepsize(p.mu_f, L, 20, 1.0);
    const double alpha = svrg_contraction(gamma, p.mu_f, L, 20, 1.0);
    const std::vector<double> ms =
        epoch_mean_squares(p, d, SamplingSource::dual_proportional, StepMode::constant, gamma,
                           20, 15, 100, 7200, origin);
    const double per_epoch = std::pow(ms[15] / ms[0], 1.0 / 15.0);

    // skewed duals: dual-proportional sampling has variance ratio 1, so its
    // theory step beats the one uniform sampling earns at ratio r > 1
    const DualState skew = DualState::from({9.0, 1.0});
    QuadInstance ps = p;
    ps.lipschitz_grad = testutil::component_lipschitz(p, skew, 1.0);
    const std::vector<double> xstar =
        testutil::minimize_al(p, kPsi, skew, 1.0, 1.0 / ps.lipschitz_grad);
    const std::vector<double> ms_prop =
        epoch_mean_squares(ps, skew, SamplingSource::dual_proportional, StepMode::theory, 1.0,
                           50, 20, 200, 7300, xstar);
    const std::vector<double> ms_unif = epoch_mean_squares(
        ps, skew, SamplingSource::uniform, StepMode::theory, 1.0, 50, 20, 200, 7300, xstar);
    const double rho_prop = std::pow(ms_prop[20] / ms_prop[0], 1.0 / 20.0);
    const double rho_unif = std::pow(ms_unif[20] / ms_unif[0], 1.0 / 20.0);

    const bool ok = slope <= -0.8 && per_epoch <= alpha + 0.05 && rho_prop <= rho_unif + 0.002;
    return {ok, "sgd slope=" + fmt(slope) + " (<= -0.8); svrg per-epoch=" + fmt(per_epoch) +
                    " vs alpha+0.05=" + fmt(alpha + 0.05) + "; skewed-dual contraction " +
                    fmt(rho_prop) + " (adaptive) vs " + fmt(rho_unif) + " (uniform)"};
  });

  // Criterion 8: high-accuracy full-gradient runs track a classical
  // exact-minimization reimplementation's dual trajectory
  gate.run(8, [&]() -> std::pair<bool, std::string> {
    Xoshiro256ss rng(17);
    double worst = 0.0;
    for (int rep = 0; rep < 3; ++rep) {
      const std::size_t n = 2 + rep % 2;
      const std::size_t m = 2 + static_cast<std::size_t>(rng.uniform() * 3);
      const QuadInstance p = testutil::make_quad(rng, n, m);
      const double N = 3.0;
      const double L = testutil::component_lipschitz(
          p, DualState::from(std::vector<double>(m, 4.0)), N);
      const double step = 1.0 / L;
      const long K = 6;
      const auto oracle = testutil::exact_dual_trajectory(p, kPsi, N, K, step);

      SolverConfig cfg;
      cfg.N = N;
      cfg.K = K;
      cfg.eps = 1e-10;
      cfg.subroutine.kind = SubroutineKind::full_gradient;
      cfg.subroutine.constant_step = step;
      cfg.subroutine.max_inner_iters = 400000;
      std::vector<std::vector<double>> seen;
      solve(p, kPsi, cfg, [&](long, const std::vector<double>&, const DualState& dd) {
        seen.push_back(dd.lambda);
      });
      for (std::size_t k = 0; k < seen.size(); ++k)
        for (std::size_t i = 0; i < m; ++i)
          worst = std::max(worst, std::fabs(seen[k][i] - oracle[k][i]));
    }
    return {worst <= 1e-6, "3 instances (n,m <= 5), K=6: max dual deviation " + fmt(worst) +
                               " (<= 1e-6)"};
  });

  // Criterion 9: rescaling property suite and extrapolation coefficients
  gate.run(9, [&]() -> std::pair<bool, std::string> {
    std::vector<double> grid;
    for (double t = -5.0; t <= 5.0 + 1e-12; t += 0.01) grid.push_back(t);
    for (RescalingKind kind : {RescalingKind::exp_extrapolated, RescalingKind::log_extrapolated,
                               RescalingKind::fraction_extrapolated}) {
      const RescalingFunction fn = make_extrapolated(kind, -0.5);
      const PropertyReport rep = verify_properties(fn, grid);
      if (!rep.all_pass()) return {false, "property suite failed for a built-in kind"};
    }
    const RescalingFunction ex = make_extrapolated(RescalingKind::exp_extrapolated, -0.5);
    const double e_half = std::exp(0.5);
    const bool coeffs = std::fabs(ex.a0 - (1.0 - 0.625 * e_half)) <= 1e-12 &&
                        std::fabs(ex.a1 - 0.5 * e_half) <= 1e-12 &&
                        std::fabs(ex.a2 - (-0.5 * e_half)) <= 1e-12;
    return {coeffs, "properties (i)-(v) and C^2 matching hold for all kinds; exp/tau=-1/2 "
                    "coefficients match 1-(5/8)e^{1/2} = " +
                        fmt(ex.a0)};
  });

  // Criterion 10: bitwise deterministic trajectories for a fixed seed
  gate.run(10, [&]() -> std::pair<bool, std::string> {
    const SipInstance p = build_sip(1000);
    SolverConfig cfg;
    cfg.N = 100.0;
    cfg.K = 10;
    cfg.eps = 1e-3;
    cfg.subroutine.kind = SubroutineKind::svrg;
    cfg.subroutine.constant_step = 1e-4;
    cfg.lambda0.assign(p.m, 1e-3);
    cfg.x0 = {0.0, 0.0};
    cfg.master_seed = 42;
    const std::string a = trajectory_csv(solve(p, kPsi, cfg), false);
    const std::string b = trajectory_csv(solve(p, kPsi, cfg), false);
    SolverConfig other = cfg;
    other.master_seed = 43;
    const std::string c = trajectory_csv(solve(p, kPsi, other), false);
    const bool ok = a == b && a != c;
    return {ok, "identical seed: byte-identical csv (" + std::to_string(a.size()) +
                    " bytes); different seed: trajectories differ"};
  });

  std::printf("acceptance: %d/10 criteria passed\n", 10 - gate.failures);
  return gate.failures;
}
