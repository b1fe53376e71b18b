#include <cmath>
#include <numbers>
#include <stdexcept>

#include "rannlr/bench.hpp"

namespace rannlr {

double SipInstance::objective(const std::vector<double>& x) const {
  const double u = x[0] - 2.0, v = x[1] - 0.2;
  return u * u + v * v;
}

void SipInstance::objective_grad(const std::vector<double>& x, std::vector<double>& out) const {
  out.resize(2);
  out[0] = 2.0 * (x[0] - 2.0);
  out[1] = 2.0 * (x[1] - 0.2);
}

double SipInstance::constraint(std::size_t i, const std::vector<double>& x) const {
  return x[1] - a[i] * x[0] * x[0];
}

void SipInstance::constraint_grad(std::size_t i, const std::vector<double>& x,
                                  std::vector<double>& out) const {
  out.resize(2);
  out[0] = -2.0 * a[i] * x[0];
  out[1] = 1.0;
}

void SipInstance::constraint_values(const std::vector<double>& x,
                                    std::vector<double>& out) const {
  out.resize(m);
  const double sq = x[0] * x[0];
  for (std::size_t i = 0; i < m; ++i) out[i] = x[1] - a[i] * sq;
}

SipInstance build_sip(std::size_t m) {
  if (m < 1) throw std::invalid_argument("need at least one constraint");
  SipInstance p;
  p.n = 2;
  p.m = m;
  p.box.lo = {-1.0, 0.0};
  p.box.hi = {1.0, 0.2};
  p.mu_f = 2.0;
  p.beta = 1.0;

  p.a.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double u = static_cast<double>(i + 1) / static_cast<double>(m);
    p.a[i] = 5.0 * std::sin(std::numbers::pi * std::sqrt(u)) / (1.0 + u * u);
    if (p.a[i] > p.a_max) {
      p.a_max = p.a[i];
      p.a_argmax = i;
    }
  }

  // 1-D reduction: at the optimum x2 = 0.2 and the tightest constraint binds
  p.x1_star = std::sqrt(0.2 / p.a_max);
  p.f_star = (p.x1_star - 2.0) * (p.x1_star - 2.0);
  p.x_star = {p.x1_star, 0.2};
  p.reference_optimum = p.f_star;

  // crude curvature bound: objective Hessian plus worst constraint curvature
  // at unit dual mass; theory-mode users supply their own
  p.lipschitz_grad = 2.0 + 2.0 * p.a_max;
  return p;
}

}  // namespace rannlr
