#include "rannlr/rescaling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace rannlr {

namespace {

// base functions zeta with first and second derivatives
double zeta(RescalingKind k, double t) {
  switch (k) {
    case RescalingKind::exp_extrapolated: return 1.0 - std::exp(-t);
    case RescalingKind::log_extrapolated: return std::log(t + 1.0);
    case RescalingKind::fraction_extrapolated: return t / (t + 1.0);
    default: throw std::invalid_argument("custom kind has no base function");
  }
}

double zeta_d1(RescalingKind k, double t) {
  switch (k) {
    case RescalingKind::exp_extrapolated: return std::exp(-t);
    case RescalingKind::log_extrapolated: return 1.0 / (t + 1.0);
    case RescalingKind::fraction_extrapolated: {
      const double u = t + 1.0;
      return 1.0 / (u * u);
    }
    default: throw std::invalid_argument("custom kind has no base function");
  }
}

double zeta_d2(RescalingKind k, double t) {
  switch (k) {
    case RescalingKind::exp_extrapolated: return -std::exp(-t);
    case RescalingKind::log_extrapolated: {
      const double u = t + 1.0;
      return -1.0 / (u * u);
    }
    case RescalingKind::fraction_extrapolated: {
      const double u = t + 1.0;
      return -2.0 / (u * u * u);
    }
    default: throw std::invalid_argument("custom kind has no base function");
  }
}

}  // namespace

RescalingFunction make_extrapolated(RescalingKind kind, double tau) {
  if (kind == RescalingKind::custom)
    throw std::invalid_argument("use make_custom for custom rescaling functions");
  if (!(tau > -1.0 && tau < 0.0))
    throw std::invalid_argument("extrapolation point tau must lie in (-1, 0)");

  RescalingFunction fn;
  fn.kind = kind;
  fn.tau = tau;
  const double z0 = zeta(kind, tau);
  const double z1 = zeta_d1(kind, tau);
  const double z2 = zeta_d2(kind, tau);
  // second-order Taylor of zeta at tau, expanded into monomial coefficients
  fn.a2 = 0.5 * z2;
  fn.a1 = z1 - tau * z2;
  fn.a0 = z0 - tau * z1 + 0.5 * tau * tau * z2;
  return fn;
}

RescalingFunction make_custom(std::function<double(double)> f,
                              std::function<double(double)> d1,
                              std::function<double(double)> d2) {
  if (!f || !d1 || !d2) throw std::invalid_argument("custom rescaling needs all three closures");
  RescalingFunction fn;
  fn.kind = RescalingKind::custom;
  fn.custom_f = std::move(f);
  fn.custom_d1 = std::move(d1);
  fn.custom_d2 = std::move(d2);
  return fn;
}

double psi(const RescalingFunction& fn, double t) {
  if (fn.kind == RescalingKind::custom) return fn.custom_f(t);
  if (t >= fn.tau) return zeta(fn.kind, t);
  return (fn.a2 * t + fn.a1) * t + fn.a0;
}

double psi_d1(const RescalingFunction& fn, double t) {
  if (fn.kind == RescalingKind::custom) return fn.custom_d1(t);
  if (t >= fn.tau) return zeta_d1(fn.kind, t);
  return 2.0 * fn.a2 * t + fn.a1;
}

double psi_d2(const RescalingFunction& fn, double t) {
  if (fn.kind == RescalingKind::custom) return fn.custom_d2(t);
  if (t >= fn.tau) return zeta_d2(fn.kind, t);
  return 2.0 * fn.a2;
}

PropertyReport verify_properties(const RescalingFunction& fn, const std::vector<double>& grid) {
  if (grid.empty()) throw std::invalid_argument("empty evaluation grid");

  PropertyReport rep;
  rep.zero_at_zero = std::fabs(psi(fn, 0.0)) <= 1e-12;
  rep.unit_slope_at_zero = std::fabs(psi_d1(fn, 0.0) - 1.0) <= 1e-12;

  rep.positive_slope = true;
  rep.negative_curvature = true;
  double a_max = std::numeric_limits<double>::infinity();
  bool saw_negative_t = false;
  double d1_min = 0.0, d2_min = 0.0;
  bool saw_positive_t = false;
  rep.derivative_consistency = true;

  const double h = 1e-5;
  for (double t : grid) {
    if (!std::isfinite(t)) throw std::invalid_argument("non-finite grid point");
    const double v1 = psi_d1(fn, t);
    const double v2 = psi_d2(fn, t);
    if (!(v1 > 0.0)) rep.positive_slope = false;
    if (!(v2 < 0.0)) rep.negative_curvature = false;
    if (t < 0.0) {
      saw_negative_t = true;
      a_max = std::min(a_max, -psi(fn, t) / (t * t));
    }
    if (t > 0.0) {
      saw_positive_t = true;
      d1_min = std::max(d1_min, t * v1);
      d2_min = std::max(d2_min, -t * t * v2);
    }
    // Central differences of psi against psi', and of psi' against psi''.
    // The third derivative jumps at the C^2 junction tau, so the O(h^2)
    // stencil model is invalid there; stencils touching tau are skipped.
    if (std::fabs(t - fn.tau) > 2.0 * h) {
      const double fd1 = (psi(fn, t + h) - psi(fn, t - h)) / (2.0 * h);
      const double fd2 = (psi_d1(fn, t + h) - psi_d1(fn, t - h)) / (2.0 * h);
      const double scale1 = std::max(std::fabs(v1), 1e-8);
      const double scale2 = std::max(std::fabs(v2), 1e-8);
      if (std::fabs(fd1 - v1) / scale1 > 1e-6) rep.derivative_consistency = false;
      if (std::fabs(fd2 - v2) / scale2 > 1e-6) rep.derivative_consistency = false;
    }
  }

  rep.a = saw_negative_t ? a_max : 0.0;
  rep.quadratic_upper = saw_negative_t && a_max > 0.0 && std::isfinite(a_max);
  rep.d1 = d1_min;
  rep.d2 = d2_min;
  rep.tail_bounds = !saw_positive_t || (d1_min > 0.0 && d2_min > 0.0 &&
                                        std::isfinite(d1_min) && std::isfinite(d2_min));
  return rep;
}

}  // namespace rannlr
