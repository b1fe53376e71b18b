#pragma once

#include <cstdint>
#include <vector>

#include "rannlr/problem.hpp"
#include "rannlr/rng.hpp"
#include "rannlr/sampling.hpp"

namespace rannlr {

// A_i(x, lambda) = (p_i / q_i) B_i(x, lambda) with p the dual-proportional
// distribution; the importance-weighted component operator
std::vector<double> scaled_operator(const ProblemInstance& p, const RescalingFunction& psi_fn,
                                    std::size_t i, const std::vector<double>& x,
                                    const DualState& d, const SamplingDistribution& q, double N);

// Proxy state for the unbiased gradient estimator
//   G(y, phi, I) = A_I(y) - phi_I + sum_i q_i phi_i.
// zero: phi == 0 (plain SGD). anchored: phi_i = A_i(anchor) implicitly, never
// materialized (the m x n table would be infeasible at m ~ 1e6); weighted_sum
// caches sum_i q_i phi_i, which equals grad L_N at the anchor. explicit_table
// stores per-index proxies (test oracles and SAGA-style schemes).
struct EstimatorState {
  enum class Mode { zero, anchored, explicit_table };
  Mode mode = Mode::zero;
  std::vector<double> anchor;
  std::vector<std::vector<double>> table;
  std::vector<double> weighted_sum;
};

EstimatorState make_zero_state(std::size_t n);
EstimatorState make_anchored_state(const ProblemInstance& p, const RescalingFunction& psi_fn,
                                   std::vector<double> anchor, const DualState& d, double N);
EstimatorState make_table_state(std::vector<std::vector<double>> table,
                                const SamplingDistribution& q);

std::vector<double> gradient_estimator(const ProblemInstance& p, const RescalingFunction& psi_fn,
                                       const std::vector<double>& y, const EstimatorState& state,
                                       std::size_t I, const DualState& d,
                                       const SamplingDistribution& q, double N);

// decreasing step gamma_t = 2 / (mu_f (t + 2(1+2r) L^2 / mu_f^2))
double sgd_stepsize(long t, double mu_f, double L, double r);

// gamma* = mu_f / ((1 + 2r + 2Mr) L^2), the minimizer of the contraction below
double svrg_stepsize(double mu_f, double L, long M, double r);

// alpha(gamma) = 1 - 2 gamma mu_f + (1 + 2r + 2Mr) gamma^2 L^2; gamma must lie
// in the interval where alpha < 1
double svrg_contraction(double gamma, double mu_f, double L, long M, double r);

enum class SubroutineKind { sgd, svrg, full_gradient };
enum class StepMode { theory, constant };

struct SubroutineSpec {
  SubroutineKind kind = SubroutineKind::svrg;
  StepMode step_mode = StepMode::constant;
  double constant_step = 1e-3;
  long epoch_length = 20;      // M, inner iterations per SVRG epoch
  long check_interval = 1000;  // termination-check period
  long max_inner_iters = 1000000;
  SamplingSource sampling = SamplingSource::dual_proportional;
  bool operator==(const SubroutineSpec&) const = default;
};

struct InnerResult {
  std::vector<double> x;
  long inner_iters = 0;
  double achieved = 0.0;  // projected stationarity at the returned iterate
};

// Box-constrained stationarity measure: || x - proj_X[x - grad L_N(x)] ||_inf.
// The raw gradient norm need not vanish at an optimum on the box boundary,
// so inner termination uses this projected form instead.
double projected_stationarity(const ProblemInstance& p, const RescalingFunction& psi_fn,
                              const std::vector<double>& x, const DualState& d, double N);

// Inexact minimization of L_N(., lambda) over the box: iterates
// y <- proj_X[y - gamma_t G(y, phi, I)], SVRG anchors refreshed every M steps.
// Terminates when projected_stationarity <= eps (checked every check_interval
// steps and at every SVRG epoch boundary) or when max_inner_iters is hit;
// eps == 0 runs the budget exactly and reports the achieved norm.
InnerResult run_inner(const ProblemInstance& p, const RescalingFunction& psi_fn,
                      const DualState& d, double N, const SubroutineSpec& spec,
                      const std::vector<double>& start, double eps, Xoshiro256ss& rng);

}  // namespace rannlr
