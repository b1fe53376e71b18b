#pragma once

#include <cstddef>
#include <vector>

#include "rannlr/problem.hpp"
#include "rannlr/rng.hpp"
#include "rannlr/solver.hpp"

namespace rannlr {

// min (x1-2)^2 + (x2-0.2)^2 over [-1,1] x [0,0.2] subject to
// g_i(x) = x2 - a_i x1^2 >= 0 with a_i = 5 sin(pi sqrt(i/m)) / (1 + (i/m)^2),
// i = 1..m ("a_i x1^2 - x2 <= 0" sign-flipped to the g >= 0 convention). At
// the optimum x2 = 0.2 and the tightest constraint binds, so
// x1* = sqrt(0.2 / max_i a_i) and f* = (x1* - 2)^2.
class SipInstance final : public ProblemInstance {
 public:
  std::vector<double> a;
  double a_max = 0.0;
  std::size_t a_argmax = 0;
  double x1_star = 0.0;
  double f_star = 0.0;
  std::vector<double> x_star;

  double objective(const std::vector<double>& x) const override;
  void objective_grad(const std::vector<double>& x, std::vector<double>& out) const override;
  double constraint(std::size_t i, const std::vector<double>& x) const override;
  void constraint_grad(std::size_t i, const std::vector<double>& x,
                       std::vector<double>& out) const override;
  void constraint_values(const std::vector<double>& x, std::vector<double>& out) const override;
};

SipInstance build_sip(std::size_t m);

// Inventory-control approximate LP. States S = [-10,10], actions A = [0,20],
// demands D = [0,10], all discretized at step h. The value function is
// approximated over the basis (1, s), giving the 2-variable LP
//   max theta_1 * E_q[1] + theta_2 * E_q[s]   (q uniform on S, E_q[s] = 0)
//   s.t. c(s,a) - 0.05 theta_1 - d(s,a) theta_2 >= 0   for every (s,a),
// with d(s,a) = s - 0.95 E[s'|s,a], posed here as min -theta_1 with
// constraints divided by beta. Every expectation depends on (s,a) only
// through w = s + a, so the tables are indexed by w rather than materialized
// per constraint (m reaches 1e6 at h = 0.02 while w takes ~2e3 values).
class AlpInstance final : public ProblemInstance {
 public:
  double h = 0.0;
  std::size_t n_s = 0, n_a = 0, n_d = 0, n_w = 0;
  std::vector<double> pmf;      // demand probabilities
  std::vector<double> e_s1;     // E[s' | w]
  std::vector<double> e_hold;   // E[(s')_+ | w]
  std::vector<double> e_back;   // E[(-s')_+ | w]
  std::vector<double> e_over;   // E[(w - D - 10)_+ | w]
  std::vector<double> e_lost;   // E[(-10 - w + D)_+ | w]
  double eq_s = 0.0;            // E_q[s], zero up to rounding
  double discount = 0.95;
  double tikhonov_mu = 0.0;     // strong-convexity regularizer weight, 0 = plain LP

  std::size_t s_index(std::size_t i) const { return i / n_a; }
  std::size_t a_index(std::size_t i) const { return i % n_a; }
  std::size_t w_index(std::size_t i) const { return s_index(i) + a_index(i); }
  double s_value(std::size_t i) const { return -10.0 + static_cast<double>(s_index(i)) * h; }
  double a_value(std::size_t i) const { return static_cast<double>(a_index(i)) * h; }
  double cost(std::size_t i) const;   // c(s,a), unnormalized
  double dcoef(std::size_t i) const;  // d(s,a) = s - 0.95 E[s'|s,a]

  double objective(const std::vector<double>& x) const override;
  void objective_grad(const std::vector<double>& x, std::vector<double>& out) const override;
  double constraint(std::size_t i, const std::vector<double>& x) const override;
  void constraint_grad(std::size_t i, const std::vector<double>& x,
                       std::vector<double>& out) const override;
  void constraint_values(const std::vector<double>& x, std::vector<double>& out) const override;
};

// The objective is linear (mu_f = 0); pass tikhonov_mu > 0 to add
// (mu/2)|theta|^2 and obtain a strongly convex variant for theory-mode runs.
AlpInstance build_alp(double h, double beta, double tikhonov_mu = 0.0);

// half-plane a1*x + a2*y <= b
struct HalfPlane {
  double a1 = 0.0, a2 = 0.0, b = 0.0;
};

// Exact 2-variable LP minimize c1*x + c2*y by randomized incremental
// insertion (deterministic permutation). Throws on infeasible or unbounded
// programs.
std::pair<std::vector<double>, double> lp_solve_2d(std::vector<HalfPlane> planes, double c1,
                                                   double c2);

struct LpReference {
  std::vector<double> theta;
  double value = 0.0;  // optimal theta_1, the ALP objective value
};

// exact optimum of the ALP as a 2-variable LP (box planes included)
LpReference lp_reference(const AlpInstance& alp);

// Projected primal-dual subgradient iterations, the comparison baseline:
//   x <- proj_X[x - step (grad f(x) - sum_i lambda_i grad g_i(x))]
//   lambda <- max(0, lambda - step g(x))
// starting from lambda = 0 and x0 (box midpoint when empty).
RunReport baseline_primal_dual(const ProblemInstance& p, long steps, double step,
                               Xoshiro256ss& rng, const std::vector<double>& x0 = {});

}  // namespace rannlr
