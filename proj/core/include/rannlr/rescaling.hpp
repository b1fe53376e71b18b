#pragma once

#include <functional>
#include <vector>

namespace rannlr {

enum class RescalingKind { exp_extrapolated, log_extrapolated, fraction_extrapolated, custom };

// Smooth concave rescaling psi: base function zeta on t >= tau, quadratic
// extrapolation a2*t^2 + a1*t + a0 on t <= tau. The extrapolation is the
// second-order Taylor expansion of zeta at tau, so psi is C^2 on all of R.
struct RescalingFunction {
  RescalingKind kind = RescalingKind::exp_extrapolated;
  double tau = -0.5;
  double a2 = 0.0, a1 = 0.0, a0 = 0.0;  // quadratic branch coefficients

  // custom kind: user-supplied closures for psi, psi', psi''
  std::function<double(double)> custom_f, custom_d1, custom_d2;
};

// tau must lie in (-1, 0) so every base function stays inside its domain.
RescalingFunction make_extrapolated(RescalingKind kind, double tau);

RescalingFunction make_custom(std::function<double(double)> f,
                              std::function<double(double)> d1,
                              std::function<double(double)> d2);

double psi(const RescalingFunction& fn, double t);
double psi_d1(const RescalingFunction& fn, double t);
double psi_d2(const RescalingFunction& fn, double t);

// Numeric audit of the defining properties over an evaluation grid:
//   (i) psi(0) = 0, (ii) psi' > 0 with psi'(0) = 1, (iii) psi'' < 0,
//   (iv) psi(t) <= -a t^2 for some a > 0 on t <= 0,
//   (v) psi'(t) <= d1/t and -psi''(t) <= d2/t^2 on t > 0.
struct PropertyReport {
  bool zero_at_zero = false;       // (i)
  bool unit_slope_at_zero = false; // psi'(0) = 1
  bool positive_slope = false;     // (ii) on grid
  bool negative_curvature = false; // (iii) on grid
  bool quadratic_upper = false;    // (iv)
  double a = 0.0;                  // largest feasible a over grid points t < 0
  bool tail_bounds = false;        // (v)
  double d1 = 0.0, d2 = 0.0;       // smallest feasible bounds over grid points t > 0
  bool derivative_consistency = false;  // psi' and psi'' vs central differences

  bool all_pass() const {
    return zero_at_zero && unit_slope_at_zero && positive_slope && negative_curvature &&
           quadratic_upper && tail_bounds && derivative_consistency;
  }
};

PropertyReport verify_properties(const RescalingFunction& fn, const std::vector<double>& grid);

}  // namespace rannlr
