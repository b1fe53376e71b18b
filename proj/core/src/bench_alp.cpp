#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rannlr/bench.hpp"

namespace rannlr {

namespace {

// standard normal CDF
double normal_cdf(double z) { return 0.5 * std::erfc(-z / 1.4142135623730951); }

std::size_t steps_in(double range, double h) {
  const double k = range / h;
  const double rounded = std::round(k);
  if (std::fabs(k - rounded) > 1e-9)
    throw std::invalid_argument("grid step h must divide the state/action/demand ranges");
  return static_cast<std::size_t>(rounded);
}

}  // namespace

double AlpInstance::cost(std::size_t i) const {
  const std::size_t w = w_index(i);
  return 20.0 * a_value(i) + 2.0 * e_hold[w] + 10.0 * e_back[w] + 10.0 * e_over[w] +
         100.0 * e_lost[w];
}

double AlpInstance::dcoef(std::size_t i) const {
  return s_value(i) - discount * e_s1[w_index(i)];
}

double AlpInstance::objective(const std::vector<double>& x) const {
  return -x[0] - eq_s * x[1] + 0.5 * tikhonov_mu * (x[0] * x[0] + x[1] * x[1]);
}

void AlpInstance::objective_grad(const std::vector<double>& x, std::vector<double>& out) const {
  out.resize(2);
  out[0] = -1.0 + tikhonov_mu * x[0];
  out[1] = -eq_s + tikhonov_mu * x[1];
}

double AlpInstance::constraint(std::size_t i, const std::vector<double>& x) const {
  return (cost(i) - (1.0 - discount) * x[0] - dcoef(i) * x[1]) / beta;
}

void AlpInstance::constraint_grad(std::size_t i, const std::vector<double>& x,
                                  std::vector<double>& out) const {
  (void)x;
  out.resize(2);
  out[0] = -(1.0 - discount) / beta;
  out[1] = -dcoef(i) / beta;
}

void AlpInstance::constraint_values(const std::vector<double>& x,
                                    std::vector<double>& out) const {
  out.resize(m);
  for (std::size_t i = 0; i < m; ++i) out[i] = constraint(i, x);
}

AlpInstance build_alp(double h, double beta, double tikhonov_mu) {
  if (!(h > 0.0)) throw std::invalid_argument("grid step must be positive");
  if (!(beta > 0.0)) throw std::invalid_argument("normalization divisor must be positive");
  if (tikhonov_mu < 0.0) throw std::invalid_argument("regularizer weight must be nonnegative");

  AlpInstance p;
  p.h = h;
  p.n_s = steps_in(20.0, h) + 1;
  p.n_a = steps_in(20.0, h) + 1;
  p.n_d = steps_in(10.0, h) + 1;
  p.n_w = p.n_s + p.n_a - 1;
  p.n = 2;
  p.m = p.n_s * p.n_a;
  p.beta = beta;
  p.tikhonov_mu = tikhonov_mu;
  p.mu_f = tikhonov_mu;  // zero for the plain linear objective
  p.box.lo = {0.0, -1000.0};
  p.box.hi = {10000.0, 1000.0};

  // demand cell probabilities from the truncated normal(5, 2^2) on [0, 10];
  // shared cell edges telescope, so the masses sum to one exactly
  const double z_lo = normal_cdf((0.0 - 5.0) / 2.0);
  const double z_hi = normal_cdf((10.0 - 5.0) / 2.0);
  const double mass = z_hi - z_lo;
  auto cdf = [&](double x) { return (normal_cdf((x - 5.0) / 2.0) - z_lo) / mass; };

  p.pmf.resize(p.n_d);
  std::vector<double> edges(p.n_d + 1);
  edges[0] = 0.0;
  for (std::size_t l = 1; l < p.n_d; ++l) edges[l] = (static_cast<double>(l) - 0.5) * h;
  edges[p.n_d] = 10.0;
  double prev = 0.0;  // cdf(0)
  for (std::size_t l = 0; l < p.n_d; ++l) {
    const double next = l + 1 == p.n_d ? 1.0 : cdf(edges[l + 1]);
    p.pmf[l] = next - prev;
    prev = next;
  }

  // all (s,a) with equal w = s + a share their expectations over D
  p.e_s1.assign(p.n_w, 0.0);
  p.e_hold.assign(p.n_w, 0.0);
  p.e_back.assign(p.n_w, 0.0);
  p.e_over.assign(p.n_w, 0.0);
  p.e_lost.assign(p.n_w, 0.0);
  for (std::size_t wi = 0; wi < p.n_w; ++wi) {
    const double w = -10.0 + static_cast<double>(wi) * h;
    double s1 = 0.0, hold = 0.0, back = 0.0, over = 0.0, lost = 0.0;
    for (std::size_t l = 0; l < p.n_d; ++l) {
      const double dl = static_cast<double>(l) * h;
      const double raw = w - dl;
      const double snext = std::min(std::max(raw, -10.0), 10.0);
      const double q = p.pmf[l];
      s1 += q * snext;
      hold += q * std::max(snext, 0.0);
      back += q * std::max(-snext, 0.0);
      over += q * std::max(raw - 10.0, 0.0);
      lost += q * std::max(-10.0 - raw, 0.0);
    }
    p.e_s1[wi] = s1;
    p.e_hold[wi] = hold;
    p.e_back[wi] = back;
    p.e_over[wi] = over;
    p.e_lost[wi] = lost;
  }

  // E_q[s] over the uniform state distribution; zero up to rounding on the
  // symmetric grid
  double sum = 0.0;
  for (std::size_t j = 0; j < p.n_s; ++j) sum += -10.0 + static_cast<double>(j) * h;
  p.eq_s = sum / static_cast<double>(p.n_s);

  // gradient scale of the normalized constraints; theory-mode users supply
  // their own bound
  double dmax = 0.0;
  for (std::size_t wi = 0; wi < p.n_w; ++wi) {
    const double lo = std::fabs(-10.0 - p.discount * p.e_s1[wi]);
    const double hi = std::fabs(10.0 - p.discount * p.e_s1[wi]);
    dmax = std::max(dmax, std::max(lo, hi));
  }
  p.lipschitz_grad = tikhonov_mu + (1.0 - p.discount + dmax) / beta;

  // published optimum of the unregularized full-scale LP
  if (tikhonov_mu == 0.0 && std::fabs(h - 0.02) < 1e-12) p.reference_optimum = -2146.94;
  return p;
}

}  // namespace rannlr
