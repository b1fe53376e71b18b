#include "rannlr/problem.hpp"

#include <algorithm>
#include <cmath>

namespace rannlr {

std::vector<double> project_box(std::vector<double> x, const Box& box) {
  if (x.size() != box.lo.size() || x.size() != box.hi.size())
    throw std::invalid_argument("dimension mismatch in box projection");
  for (std::size_t j = 0; j < x.size(); ++j)
    x[j] = std::min(std::max(x[j], box.lo[j]), box.hi[j]);
  return x;
}

void ProblemInstance::constraint_values(const std::vector<double>& x,
                                        std::vector<double>& out) const {
  out.resize(m);
  for (std::size_t i = 0; i < m; ++i) out[i] = constraint(i, x);
}

DualState DualState::from(std::vector<double> lam) {
  if (lam.empty()) throw std::invalid_argument("empty dual vector");
  double sum = 0.0, comp = 0.0;  // Kahan
  for (std::size_t i = 0; i < lam.size(); ++i) {
    if (!(lam[i] > 0.0) || !std::isfinite(lam[i]))
      throw std::invalid_argument("dual variables must be strictly positive");
    const double y = lam[i] - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  DualState d;
  d.lambda = std::move(lam);
  d.l1_norm = sum;
  return d;
}

double augmented_lagrangian(const ProblemInstance& p, const RescalingFunction& psi_fn,
                            const std::vector<double>& x, const DualState& d, double N) {
  if (!(N > 0.0)) throw std::invalid_argument("scaling parameter N must be positive");
  double sum = 0.0, comp = 0.0;  // Kahan over the m constraint terms
  for (std::size_t i = 0; i < p.m; ++i) {
    const double gi = p.constraint(i, x);
    if (!std::isfinite(gi)) throw EvalError("non-finite constraint value", i);
    const double term = d.lambda[i] * psi(psi_fn, N * gi);
    if (!std::isfinite(term)) throw EvalError("non-finite rescaled constraint term", i);
    const double y = term - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  const double fx = p.objective(x);
  if (!std::isfinite(fx)) throw EvalError("non-finite objective value", p.m);
  return fx - sum / N;
}

std::vector<double> grad_augmented_lagrangian(const ProblemInstance& p,
                                              const RescalingFunction& psi_fn,
                                              const std::vector<double>& x, const DualState& d,
                                              double N) {
  if (!(N > 0.0)) throw std::invalid_argument("scaling parameter N must be positive");
  std::vector<double> grad(p.n), gi_grad(p.n);
  p.objective_grad(x, grad);
  std::vector<double> comp(p.n, 0.0);  // per-coordinate Kahan compensation
  for (std::size_t i = 0; i < p.m; ++i) {
    const double gi = p.constraint(i, x);
    if (!std::isfinite(gi)) throw EvalError("non-finite constraint value", i);
    const double w = -d.lambda[i] * psi_d1(psi_fn, N * gi);
    p.constraint_grad(i, x, gi_grad);
    for (std::size_t j = 0; j < p.n; ++j) {
      const double y = w * gi_grad[j] - comp[j];
      const double t = grad[j] + y;
      comp[j] = (t - grad[j]) - y;
      grad[j] = t;
    }
  }
  return grad;
}

std::vector<double> component_operator(const ProblemInstance& p, const RescalingFunction& psi_fn,
                                       std::size_t i, const std::vector<double>& x,
                                       const DualState& d, double N) {
  if (i >= p.m) throw std::invalid_argument("constraint index out of range");
  std::vector<double> grad(p.n), gi_grad(p.n);
  p.objective_grad(x, grad);
  const double gi = p.constraint(i, x);
  if (!std::isfinite(gi)) throw EvalError("non-finite constraint value", i);
  const double w = d.l1_norm * psi_d1(psi_fn, N * gi);
  p.constraint_grad(i, x, gi_grad);
  for (std::size_t j = 0; j < p.n; ++j) grad[j] -= w * gi_grad[j];
  return grad;
}

double stationarity_norm(const ProblemInstance& p, const RescalingFunction& psi_fn,
                         const std::vector<double>& x, const DualState& d, double N) {
  const std::vector<double> g = grad_augmented_lagrangian(p, psi_fn, x, d, N);
  double nrm = 0.0;
  for (double v : g) nrm = std::max(nrm, std::fabs(v));
  return nrm;
}

Violation max_violation(const ProblemInstance& p, const std::vector<double>& x) {
  Violation v;
  for (std::size_t i = 0; i < p.m; ++i) {
    const double gi = p.constraint(i, x);
    if (!std::isfinite(gi)) throw EvalError("non-finite constraint value", i);
    const double viol = std::max(0.0, -gi);
    if (viol > v.value) {
      v.value = viol;
      v.index = i;
    }
  }
  return v;
}

}  // namespace rannlr
