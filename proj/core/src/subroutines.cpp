#include "rannlr/subroutines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace rannlr {

std::vector<double> scaled_operator(const ProblemInstance& p, const RescalingFunction& psi_fn,
                                    std::size_t i, const std::vector<double>& x,
                                    const DualState& d, const SamplingDistribution& q, double N) {
  if (i >= p.m) throw std::invalid_argument("constraint index out of range");
  if (!(q.probs[i] > 0.0)) throw std::invalid_argument("sampled index has zero probability");
  std::vector<double> b = component_operator(p, psi_fn, i, x, d, N);
  const double ratio = d.lambda[i] / (d.l1_norm * q.probs[i]);  // p_i / q_i
  for (double& v : b) v *= ratio;
  return b;
}

EstimatorState make_zero_state(std::size_t n) {
  EstimatorState s;
  s.mode = EstimatorState::Mode::zero;
  s.weighted_sum.assign(n, 0.0);
  return s;
}

EstimatorState make_anchored_state(const ProblemInstance& p, const RescalingFunction& psi_fn,
                                   std::vector<double> anchor, const DualState& d, double N) {
  EstimatorState s;
  s.mode = EstimatorState::Mode::anchored;
  // sum_i q_i A_i(anchor) telescopes to grad L_N(anchor) for any q
  s.weighted_sum = grad_augmented_lagrangian(p, psi_fn, anchor, d, N);
  s.anchor = std::move(anchor);
  return s;
}

EstimatorState make_table_state(std::vector<std::vector<double>> table,
                                const SamplingDistribution& q) {
  if (table.size() != q.probs.size())
    throw std::invalid_argument("proxy table size must match the distribution");
  EstimatorState s;
  s.mode = EstimatorState::Mode::explicit_table;
  const std::size_t n = table.empty() ? 0 : table[0].size();
  s.weighted_sum.assign(n, 0.0);
  std::vector<double> comp(n, 0.0);  // Kahan per coordinate
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (table[i].size() != n) throw std::invalid_argument("ragged proxy table");
    for (std::size_t j = 0; j < n; ++j) {
      const double y = q.probs[i] * table[i][j] - comp[j];
      const double t = s.weighted_sum[j] + y;
      comp[j] = (t - s.weighted_sum[j]) - y;
      s.weighted_sum[j] = t;
    }
  }
  s.table = std::move(table);
  return s;
}

std::vector<double> gradient_estimator(const ProblemInstance& p, const RescalingFunction& psi_fn,
                                       const std::vector<double>& y, const EstimatorState& state,
                                       std::size_t I, const DualState& d,
                                       const SamplingDistribution& q, double N) {
  std::vector<double> g = scaled_operator(p, psi_fn, I, y, d, q, N);
  switch (state.mode) {
    case EstimatorState::Mode::zero:
      return g;
    case EstimatorState::Mode::anchored: {
      const std::vector<double> phi = scaled_operator(p, psi_fn, I, state.anchor, d, q, N);
      for (std::size_t j = 0; j < g.size(); ++j) g[j] += state.weighted_sum[j] - phi[j];
      return g;
    }
    case EstimatorState::Mode::explicit_table: {
      const std::vector<double>& phi = state.table[I];
      for (std::size_t j = 0; j < g.size(); ++j) g[j] += state.weighted_sum[j] - phi[j];
      return g;
    }
  }
  throw std::logic_error("unreachable estimator mode");
}

double sgd_stepsize(long t, double mu_f, double L, double r) {
  if (!(mu_f > 0.0)) throw std::invalid_argument("sgd stepsize needs mu_f > 0");
  if (!(L >= mu_f)) throw std::invalid_argument("L must dominate mu_f");
  if (!(r >= 1.0)) throw std::invalid_argument("variance ratio is at least 1");
  if (t < 0) throw std::invalid_argument("negative iteration index");
  const double ratio = L / mu_f;
  return 2.0 / (mu_f * (static_cast<double>(t) + 2.0 * (1.0 + 2.0 * r) * ratio * ratio));
}

double svrg_stepsize(double mu_f, double L, long M, double r) {
  if (!(mu_f > 0.0)) throw std::invalid_argument("svrg stepsize needs mu_f > 0");
  if (!(L >= mu_f)) throw std::invalid_argument("L must dominate mu_f");
  if (!(r >= 1.0)) throw std::invalid_argument("variance ratio is at least 1");
  if (M < 1) throw std::invalid_argument("epoch length must be positive");
  const double c = 1.0 + 2.0 * r + 2.0 * static_cast<double>(M) * r;
  return mu_f / (c * L * L);
}

double svrg_contraction(double gamma, double mu_f, double L, long M, double r) {
  if (!(mu_f > 0.0) || !(L >= mu_f) || !(r >= 1.0) || M < 1)
    throw std::invalid_argument("invalid contraction parameters");
  const double c = 1.0 + 2.0 * r + 2.0 * static_cast<double>(M) * r;
  if (!(gamma > 0.0) || !(gamma < 2.0 * mu_f / (c * L * L)))
    throw std::invalid_argument("step size outside the contraction interval");
  return 1.0 - 2.0 * gamma * mu_f + c * gamma * gamma * L * L;
}

double projected_stationarity(const ProblemInstance& p, const RescalingFunction& psi_fn,
                              const std::vector<double>& x, const DualState& d, double N) {
  const std::vector<double> g = grad_augmented_lagrangian(p, psi_fn, x, d, N);
  double nrm = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double stepped = std::min(std::max(x[j] - g[j], p.box.lo[j]), p.box.hi[j]);
    nrm = std::max(nrm, std::fabs(x[j] - stepped));
  }
  return nrm;
}

namespace {

double mapping_norm_from_grad(const std::vector<double>& x, const std::vector<double>& g,
                              const Box& box) {
  double nrm = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double stepped = std::min(std::max(x[j] - g[j], box.lo[j]), box.hi[j]);
    nrm = std::max(nrm, std::fabs(x[j] - stepped));
  }
  return nrm;
}

}  // namespace

InnerResult run_inner(const ProblemInstance& p, const RescalingFunction& psi_fn,
                      const DualState& d, double N, const SubroutineSpec& spec,
                      const std::vector<double>& start, double eps, Xoshiro256ss& rng) {
  if (start.size() != p.n) throw std::invalid_argument("start point has wrong dimension");
  if (!(eps >= 0.0) || !std::isfinite(eps)) throw std::invalid_argument("bad inner tolerance");
  if (spec.max_inner_iters < 1) throw std::invalid_argument("inner budget must be positive");
  if (spec.check_interval < 1) throw std::invalid_argument("check interval must be positive");
  if (spec.kind == SubroutineKind::svrg && spec.epoch_length < 1)
    throw std::invalid_argument("epoch length must be positive");
  if (spec.step_mode == StepMode::constant && !(spec.constant_step > 0.0))
    throw std::invalid_argument("constant step must be positive");

  const bool need_ratio = spec.step_mode == StepMode::theory &&
                          spec.kind != SubroutineKind::full_gradient;
  double r = 1.0;
  SamplingDistribution q;
  if (spec.kind != SubroutineKind::full_gradient) {
    q = spec.sampling == SamplingSource::uniform ? uniform_distribution(p.m)
                                                 : scaled_distribution(d);
    if (need_ratio && spec.sampling == SamplingSource::uniform) {
      const SamplingDistribution prop = scaled_distribution(d);
      r = variance_ratio(prop, q);
    }
  }

  double gamma = spec.constant_step;
  if (spec.step_mode == StepMode::theory) {
    if (spec.kind == SubroutineKind::svrg)
      gamma = svrg_stepsize(p.mu_f, p.lipschitz_grad, spec.epoch_length, r);
    else if (spec.kind == SubroutineKind::full_gradient)
      gamma = 1.0 / p.lipschitz_grad;
  }

  std::vector<double> y = project_box(start, p.box);
  const double l1 = d.l1_norm;

  // scratch buffers; the estimator arithmetic is inlined to stay allocation-free
  std::vector<double> grad_f_y(p.n), grad_g(p.n), step_dir(p.n);
  std::vector<double> anchor, anchor_full, grad_f_anchor(p.n), grad_g_anchor(p.n);

  long t = 0;
  double achieved = std::numeric_limits<double>::infinity();
  bool achieved_fresh = false;

  auto full_check = [&](const std::vector<double>& at) {
    const std::vector<double> g = grad_augmented_lagrangian(p, psi_fn, at, d, N);
    achieved = mapping_norm_from_grad(at, g, p.box);
    achieved_fresh = true;
    return achieved;
  };

  if (spec.kind == SubroutineKind::full_gradient) {
    while (true) {
      const std::vector<double> g = grad_augmented_lagrangian(p, psi_fn, y, d, N);
      achieved = mapping_norm_from_grad(y, g, p.box);
      if (eps > 0.0 && achieved <= eps) return {y, t, achieved};
      if (t >= spec.max_inner_iters) return {y, t, achieved};
      for (std::size_t j = 0; j < p.n; ++j)
        y[j] = std::min(std::max(y[j] - gamma * g[j], p.box.lo[j]), p.box.hi[j]);
      ++t;
    }
  }

  const bool svrg = spec.kind == SubroutineKind::svrg;
  while (true) {
    const bool epoch_boundary = svrg && t % spec.epoch_length == 0;
    if (epoch_boundary) {
      anchor = y;
      anchor_full = grad_augmented_lagrangian(p, psi_fn, anchor, d, N);
      p.objective_grad(anchor, grad_f_anchor);
      achieved = mapping_norm_from_grad(anchor, anchor_full, p.box);
      achieved_fresh = true;
      if (eps > 0.0 && achieved <= eps) return {y, t, achieved};
    } else if (t % spec.check_interval == 0) {
      if (eps > 0.0 && full_check(y) <= eps) return {y, t, achieved};
    }
    if (t >= spec.max_inner_iters) {
      if (!achieved_fresh) full_check(y);
      return {y, t, achieved};
    }

    const std::size_t I = draw_index(q, rng);
    const double ratio = d.lambda[I] / (l1 * q.probs[I]);  // p_I / q_I

    p.objective_grad(y, grad_f_y);
    const double gy = p.constraint(I, y);
    if (!std::isfinite(gy)) throw EvalError("non-finite constraint value", I);
    const double wy = l1 * psi_d1(psi_fn, N * gy);
    p.constraint_grad(I, y, grad_g);

    if (svrg) {
      const double ga = p.constraint(I, anchor);
      const double wa = l1 * psi_d1(psi_fn, N * ga);
      p.constraint_grad(I, anchor, grad_g_anchor);
      for (std::size_t j = 0; j < p.n; ++j) {
        const double by = grad_f_y[j] - wy * grad_g[j];
        const double ba = grad_f_anchor[j] - wa * grad_g_anchor[j];
        step_dir[j] = ratio * (by - ba) + anchor_full[j];
      }
    } else {
      for (std::size_t j = 0; j < p.n; ++j)
        step_dir[j] = ratio * (grad_f_y[j] - wy * grad_g[j]);
    }

    if (spec.step_mode == StepMode::theory && spec.kind == SubroutineKind::sgd)
      gamma = sgd_stepsize(t, p.mu_f, p.lipschitz_grad, r);

    for (std::size_t j = 0; j < p.n; ++j) {
      y[j] = std::min(std::max(y[j] - gamma * step_dir[j], p.box.lo[j]), p.box.hi[j]);
      if (!std::isfinite(y[j]))
        throw std::runtime_error("non-finite inner iterate at iteration " + std::to_string(t));
    }
    achieved_fresh = false;
    ++t;
  }
}

}  // namespace rannlr
