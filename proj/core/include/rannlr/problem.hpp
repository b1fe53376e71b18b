#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rannlr/rescaling.hpp"

namespace rannlr {

struct Box {
  std::vector<double> lo, hi;
};

// exact Euclidean projection onto a box: componentwise clamp
std::vector<double> project_box(std::vector<double> x, const Box& box);

// a constraint oracle returned a non-finite value; index says which one
struct EvalError : std::runtime_error {
  std::size_t index;
  EvalError(const std::string& what, std::size_t i) : std::runtime_error(what), index(i) {}
};

// Convex program: min f(x) over the box X subject to g_i(x) >= 0, i in [m].
// Constraint oracles return values pre-divided by beta (the normalization
// divisor); oracles must be pure so repeated evaluation is bitwise identical.
class ProblemInstance {
 public:
  virtual ~ProblemInstance() = default;

  std::size_t n = 0, m = 0;
  Box box;
  double mu_f = 0.0;           // strong-convexity modulus of f (0 for linear objectives)
  double lipschitz_grad = 0.0; // bound on the component-gradient Lipschitz constant
  double beta = 1.0;           // constraint normalization divisor
  std::optional<double> reference_optimum;  // known f* for gap reporting

  virtual double objective(const std::vector<double>& x) const = 0;
  virtual void objective_grad(const std::vector<double>& x, std::vector<double>& out) const = 0;
  virtual double constraint(std::size_t i, const std::vector<double>& x) const = 0;
  virtual void constraint_grad(std::size_t i, const std::vector<double>& x,
                               std::vector<double>& out) const = 0;
  // batched constraint values; default loops over the per-index oracle
  virtual void constraint_values(const std::vector<double>& x, std::vector<double>& out) const;
};

// Strictly positive dual variables with a cached l1 norm.
struct DualState {
  std::vector<double> lambda;
  double l1_norm = 0.0;

  static DualState from(std::vector<double> lam);  // validates positivity
};

// L_N(x, lambda) = f(x) - N^{-1} sum_i lambda_i psi(N g_i(x))
double augmented_lagrangian(const ProblemInstance& p, const RescalingFunction& psi_fn,
                            const std::vector<double>& x, const DualState& d, double N);

// grad_x L_N = grad f(x) - sum_i lambda_i psi'(N g_i(x)) grad g_i(x)
std::vector<double> grad_augmented_lagrangian(const ProblemInstance& p,
                                              const RescalingFunction& psi_fn,
                                              const std::vector<double>& x, const DualState& d,
                                              double N);

// B_i(x, lambda) = grad f(x) - |lambda|_1 psi'(N g_i(x)) grad g_i(x),
// the gradient of the i-th finite-sum component of L_N
std::vector<double> component_operator(const ProblemInstance& p, const RescalingFunction& psi_fn,
                                       std::size_t i, const std::vector<double>& x,
                                       const DualState& d, double N);

// infinity norm of grad_x L_N
double stationarity_norm(const ProblemInstance& p, const RescalingFunction& psi_fn,
                         const std::vector<double>& x, const DualState& d, double N);

struct Violation {
  double value = 0.0;
  std::size_t index = 0;
};

// max_i max(0, -g_i(x)) plus the attaining index
Violation max_violation(const ProblemInstance& p, const std::vector<double>& x);

}  // namespace rannlr
