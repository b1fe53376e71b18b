#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rannlr/problem.hpp"
#include "rannlr/sampling.hpp"
#include "rannlr/subroutines.hpp"

namespace rannlr {

// lambda'_i = lambda_i psi'(N g_i(x)); strictly positive since psi' > 0.
// Results are floored at the smallest positive normal double so positivity
// survives exponent underflow on long runs.
DualState dual_update(const DualState& d, const std::vector<double>& x, const ProblemInstance& p,
                      const RescalingFunction& psi_fn, double N);

// K = ceil( ln(2 lambda_gap / target_eps) / ln(N / c_R) ), clamped to >= 1
long outer_iterations_for(double target_eps, double N, double c_R, double lambda_gap);

// inner tolerance (1 - c_R/N) target_eps / (4 C_Phi)
double inner_eps_for(double target_eps, double N, double c_R, double C_Phi);

// Analysis constants for the theory budget mode. They are intrinsic to the
// method and unknowable at runtime, so they are always user-supplied.
struct TheoryConstants {
  double c_R = 1.0;
  double C_Phi = 1.0;
  double A = 1.0;     // sublinear-rate constant
  double B = 1.0;     // sublinear-rate offset
  double zeta = 1.0;  // linear-rate constant
  double alpha = 0.5; // linear contraction factor, in (0, 1)
  double lambda_star_gap = 1.0;  // estimate of |lambda^0 - lambda*|_inf
  double x0_star_gap = 1.0;      // estimate of |x^0 - x*|_inf
  bool operator==(const TheoryConstants&) const = default;
};

enum class RateKind { sublinear, linear };

// Per-outer-iteration inner budget J_k. The sublinear and linear forms differ,
// and k = 0 uses the initial-distance variant; N, L, n are the scaling
// parameter, the configured gradient-Lipschitz bound, and the dimension.
long theory_budget(long k, long K, double eps, double delta, const TheoryConstants& c,
                   RateKind rate_kind, double N, double L, std::size_t n);

enum class BudgetMode { adaptive, theory };

struct SolverConfig {
  double N = 100.0;
  std::optional<long> K;  // outer iterations; unset derives it from the theory constants
  double eps = 1e-4;      // inner stationarity tolerance
  double delta = 0.1;     // overall failure probability (theory mode)
  double target_eps = 1e-4;
  SubroutineSpec subroutine;
  BudgetMode budget_mode = BudgetMode::adaptive;
  std::optional<TheoryConstants> theory_constants;
  std::vector<double> lambda0;  // empty means all-ones
  std::vector<double> x0;       // empty means box midpoint
  std::uint64_t master_seed = 0;
  bool operator==(const SolverConfig&) const = default;
};

struct IterationRow {
  long k = 0;
  double f = 0.0;
  double max_violation = 0.0;
  double stationarity = 0.0;  // achieved projected stationarity of the inner solve
  long inner_iters = 0;
  long cum_inner_iters = 0;
  double wall_ms = 0.0;
  double lambda_min = 0.0, lambda_max = 0.0, lambda_l1 = 0.0;
  bool operator==(const IterationRow&) const = default;
};

struct RunReport {
  std::string algorithm;
  SolverConfig config;
  std::uint64_t seed = 0;
  std::vector<IterationRow> rows;
  std::vector<double> final_x;
  double final_objective = 0.0;
  std::optional<double> reference_optimum;
  std::optional<double> final_relative_gap;
  double precompute_ms = 0.0;
  double solve_ms = 0.0;
  bool operator==(const RunReport&) const = default;
};

// The inner solver stalled (budget exhausted far from tolerance) on three
// consecutive outer iterations; signals step-size or L misconfiguration.
struct SolverAbort : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// called after each completed outer iteration with the post-update duals
using SolveObserver =
    std::function<void(long completed, const std::vector<double>& x, const DualState& d)>;

// Outer loop: inexact primal minimization of L_N(., lambda^k) warm-started at
// x^k, then the multiplicative dual update. Adaptive mode runs each inner
// solve until the tolerance or budget; theory mode runs exactly J_k iterations
// and records the achieved norm (full_gradient ignores the probabilistic
// budgets and runs to tolerance).
RunReport solve(const ProblemInstance& p, const RescalingFunction& psi_fn,
                const SolverConfig& cfg, const SolveObserver& observer = {});

// serialization: JSON document and CSV trajectory (one row per outer
// iteration); all floating-point values at 17 significant digits
std::string config_json(const SolverConfig& cfg);
SolverConfig config_from_json_text(const std::string& text);
std::string report_json(const RunReport& report);
RunReport report_from_json(const std::string& text);
std::string trajectory_csv(const RunReport& report, bool include_wall_ms = true);
std::string sampling_csv(const SamplingDistribution& dist);

}  // namespace rannlr
