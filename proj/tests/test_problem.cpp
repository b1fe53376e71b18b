#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "rannlr/problem.hpp"
#include "rannlr/rng.hpp"
#include "test_instances.hpp"

using namespace rannlr;
using testutil::QuadInstance;
using testutil::make_quad;

namespace {

// n=1, m=1: f(x) = x^2, g(x) = 1 - x
class TinyInstance final : public ProblemInstance {
 public:
  TinyInstance() {
    n = 1;
    m = 1;
    box.lo = {-10.0};
    box.hi = {10.0};
    mu_f = 2.0;
  }
  double objective(const std::vector<double>& x) const override { return x[0] * x[0]; }
  void objective_grad(const std::vector<double>& x, std::vector<double>& out) const override {
    out.assign(1, 2.0 * x[0]);
  }
  double constraint(std::size_t, const std::vector<double>& x) const override {
    return 1.0 - x[0];
  }
  void constraint_grad(std::size_t, const std::vector<double>&,
                       std::vector<double>& out) const override {
    out.assign(1, -1.0);
  }
};

// m constraints that are identically zero at every x
class ZeroConstraints final : public ProblemInstance {
 public:
  explicit ZeroConstraints(std::size_t mm) {
    n = 2;
    m = mm;
    box.lo = {-5.0, -5.0};
    box.hi = {5.0, 5.0};
    mu_f = 1.0;
  }
  double objective(const std::vector<double>& x) const override {
    return 0.5 * (x[0] * x[0] + x[1] * x[1]) + 3.0 * x[0];
  }
  void objective_grad(const std::vector<double>& x, std::vector<double>& out) const override {
    out = {x[0] + 3.0, x[1]};
  }
  double constraint(std::size_t, const std::vector<double>&) const override { return 0.0; }
  void constraint_grad(std::size_t, const std::vector<double>&,
                       std::vector<double>& out) const override {
    out.assign(2, 0.0);
  }
};

class NanConstraint final : public ProblemInstance {
 public:
  NanConstraint() {
    n = 1;
    m = 3;
    box.lo = {-1.0};
    box.hi = {1.0};
    mu_f = 1.0;
  }
  double objective(const std::vector<double>& x) const override { return x[0] * x[0]; }
  void objective_grad(const std::vector<double>& x, std::vector<double>& out) const override {
    out.assign(1, 2.0 * x[0]);
  }
  double constraint(std::size_t i, const std::vector<double>&) const override {
    return i == 1 ? std::numeric_limits<double>::quiet_NaN() : 1.0;
  }
  void constraint_grad(std::size_t, const std::vector<double>&,
                       std::vector<double>& out) const override {
    out.assign(1, 0.0);
  }
};

const RescalingFunction kPsi = make_extrapolated(RescalingKind::exp_extrapolated, -0.5);

}  // namespace

TEST_CASE("box projection clamps componentwise") {
  const Box box{{0.0, 0.0}, {1.0, 1.0}};
  CHECK(project_box({0.3, 0.7}, box) == std::vector<double>{0.3, 0.7});
  CHECK(project_box({2.0, -1.0}, box) == std::vector<double>{1.0, 0.0});
  const std::vector<double> once = project_box({2.0, -1.0}, box);
  CHECK(project_box(once, box) == once);
  CHECK_THROWS_AS(project_box({1.0}, box), std::invalid_argument);
}

TEST_CASE("dual state validates positivity and caches the l1 norm") {
  CHECK_THROWS_AS(DualState::from({}), std::invalid_argument);
  CHECK_THROWS_AS(DualState::from({1.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(DualState::from({1.0, -2.0}), std::invalid_argument);
  CHECK_THROWS_AS(DualState::from({std::numeric_limits<double>::infinity()}),
                  std::invalid_argument);
  Xoshiro256ss rng(3);
  std::vector<double> lam(257);
  for (double& v : lam) v = 0.1 + rng.uniform();
  const DualState d = DualState::from(lam);
  double plain = 0.0;
  for (double v : lam) plain += v;
  CHECK(std::fabs(d.l1_norm - plain) / plain < 1e-12);
}

TEST_CASE("augmented lagrangian on the tiny instance") {
  const TinyInstance p;
  const DualState d = DualState::from({2.0});
  // f(0) - 2 psi(1) = -2 (1 - e^{-1})
  CHECK(std::fabs(augmented_lagrangian(p, kPsi, {0.0}, d, 1.0) - (-1.2642411176571153)) < 1e-14);
  const std::vector<double> g = grad_augmented_lagrangian(p, kPsi, {0.0}, d, 1.0);
  REQUIRE(g.size() == 1);
  CHECK(std::fabs(g[0] - 0.7357588823428846) < 1e-14);
  CHECK(std::fabs(stationarity_norm(p, kPsi, {0.0}, d, 1.0) - 0.7357588823428846) < 1e-14);
}

TEST_CASE("all-zero constraints collapse the lagrangian to the objective") {
  const ZeroConstraints p(7);
  const std::vector<double> x{1.25, -0.5};
  const DualState d1 = DualState::from(std::vector<double>(7, 0.3));
  const DualState d2 = DualState::from(std::vector<double>(7, 29.0));  // scaled duals
  CHECK(augmented_lagrangian(p, kPsi, x, d1, 2.5) == p.objective(x));
  CHECK(augmented_lagrangian(p, kPsi, x, d2, 2.5) == p.objective(x));
  // psi'(0) = 1, so the gradient is grad f - sum_i lambda_i grad g_i = grad f
  std::vector<double> fgrad;
  p.objective_grad(x, fgrad);
  CHECK(grad_augmented_lagrangian(p, kPsi, x, d1, 2.5) == fgrad);
}

TEST_CASE("single-constraint component operator equals the full gradient") {
  const TinyInstance p;
  const DualState d = DualState::from({2.0});
  const std::vector<double> x{0.37};
  const std::vector<double> b = component_operator(p, kPsi, 0, x, d, 1.0);
  const std::vector<double> g = grad_augmented_lagrangian(p, kPsi, x, d, 1.0);
  REQUIRE(b.size() == g.size());
  CHECK(std::fabs(b[0] - g[0]) < 1e-14);
  const std::vector<double> b0 = component_operator(p, kPsi, 0, {0.0}, d, 1.0);
  CHECK(std::fabs(b0[0] - 0.7357588823428846) < 1e-14);
  CHECK_THROWS_AS(component_operator(p, kPsi, 1, x, d, 1.0), std::invalid_argument);
}

TEST_CASE("finite-sum identity: weighted components reproduce the gradient") {
  Xoshiro256ss rng(11);
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t n = 1 + static_cast<std::size_t>(rng.uniform() * 4);
    const std::size_t m = 1 + static_cast<std::size_t>(rng.uniform() * 49);
    const QuadInstance p = make_quad(rng, n, m);
    std::vector<double> lam(m), x(n);
    for (double& v : lam) v = 0.1 + 2.0 * rng.uniform();
    for (double& v : x) v = -2.0 + 4.0 * rng.uniform();
    const DualState d = DualState::from(lam);
    const double N = 0.5 + 5.0 * rng.uniform();

    std::vector<double> sum(n, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      const std::vector<double> bi = component_operator(p, kPsi, i, x, d, N);
      const double w = d.lambda[i] / d.l1_norm;
      for (std::size_t j = 0; j < n; ++j) sum[j] += w * bi[j];
    }
    const std::vector<double> g = grad_augmented_lagrangian(p, kPsi, x, d, N);
    for (std::size_t j = 0; j < n; ++j) CHECK(std::fabs(sum[j] - g[j]) <= 1e-10);
  }
}

TEST_CASE("gradient matches central finite differences") {
  Xoshiro256ss rng(5);
  int draws = 0;
  while (draws < 100) {
    const std::size_t n = 1 + static_cast<std::size_t>(rng.uniform() * 3);
    const std::size_t m = 1 + static_cast<std::size_t>(rng.uniform() * 10);
    const QuadInstance p = make_quad(rng, n, m);
    std::vector<double> lam(m), x(n);
    for (double& v : lam) v = 0.1 + rng.uniform();
    for (double& v : x) v = -2.0 + 4.0 * rng.uniform();
    const DualState d = DualState::from(lam);
    const double N = 0.5 + 3.0 * rng.uniform();
    ++draws;

    const std::vector<double> g = grad_augmented_lagrangian(p, kPsi, x, d, N);
    for (std::size_t j = 0; j < n; ++j) {
      const double h = 1e-5 * (1.0 + std::fabs(x[j]));
      std::vector<double> xp = x, xm = x;
      xp[j] += h;
      xm[j] -= h;
      const double fd = (augmented_lagrangian(p, kPsi, xp, d, N) -
                         augmented_lagrangian(p, kPsi, xm, d, N)) /
                        (2.0 * h);
      const double scale = std::max(std::fabs(g[j]), 1.0);
      CHECK(std::fabs(fd - g[j]) / scale <= 1e-6);
    }
  }
}

TEST_CASE("strong convexity witness for the lagrangian gradient") {
  Xoshiro256ss rng(29);
  for (int rep = 0; rep < 50; ++rep) {
    const QuadInstance p = make_quad(rng, 3, 8);
    std::vector<double> lam(8), x1(3), x2(3);
    for (double& v : lam) v = 0.1 + rng.uniform();
    for (double& v : x1) v = -3.0 + 6.0 * rng.uniform();
    for (double& v : x2) v = -3.0 + 6.0 * rng.uniform();
    const DualState d = DualState::from(lam);
    const double N = 0.5 + 2.0 * rng.uniform();
    const std::vector<double> g1 = grad_augmented_lagrangian(p, kPsi, x1, d, N);
    const std::vector<double> g2 = grad_augmented_lagrangian(p, kPsi, x2, d, N);
    double inner = 0.0, dist2 = 0.0;
    for (std::size_t j = 0; j < 3; ++j) {
      inner += (g1[j] - g2[j]) * (x1[j] - x2[j]);
      dist2 += (x1[j] - x2[j]) * (x1[j] - x2[j]);
    }
    CHECK(inner >= p.mu_f * dist2 - 1e-9);
  }
}

TEST_CASE("infinity norm dominates every gradient coordinate") {
  Xoshiro256ss rng(31);
  const QuadInstance p = make_quad(rng, 4, 6);
  const DualState d = DualState::from({0.5, 1.0, 0.2, 0.9, 1.4, 0.3});
  const std::vector<double> x{0.1, -0.7, 1.3, 0.4};
  const double nrm = stationarity_norm(p, kPsi, x, d, 2.0);
  const std::vector<double> g = grad_augmented_lagrangian(p, kPsi, x, d, 2.0);
  for (double v : g) CHECK(nrm >= std::fabs(v));
}

TEST_CASE("max violation picks the worst negative constraint") {
  Xoshiro256ss rng(37);
  QuadInstance p = make_quad(rng, 2, 2);
  // force g = (0.5, -0.3) at x = 0
  p.arow = {{1.0, 0.0}, {1.0, 0.0}};
  p.brhs = {0.5, -0.3};
  const Violation v = max_violation(p, {0.0, 0.0});
  CHECK(v.value == doctest::Approx(0.3).epsilon(1e-14));
  CHECK(v.index == 1);

  p.brhs = {0.5, 0.1};  // all feasible now
  CHECK(max_violation(p, {0.0, 0.0}).value == 0.0);
}

TEST_CASE("non-finite constraint values surface as evaluation errors") {
  const NanConstraint p;
  const DualState d = DualState::from({1.0, 1.0, 1.0});
  CHECK_THROWS_AS(augmented_lagrangian(p, kPsi, {0.5}, d, 1.0), EvalError);
  try {
    augmented_lagrangian(p, kPsi, {0.5}, d, 1.0);
  } catch (const EvalError& e) {
    CHECK(e.index == 1);
  }
  CHECK_THROWS_AS(max_violation(p, {0.5}), EvalError);
}

TEST_CASE("beta rescales effective constraint values exactly") {
  Xoshiro256ss rng(41);
  QuadInstance raw = make_quad(rng, 3, 12);
  QuadInstance scaled = raw;
  scaled.beta = 40.0;
  const std::vector<double> x{0.3, -1.1, 0.8};
  for (std::size_t i = 0; i < raw.m; ++i) {
    const double r = raw.constraint(i, x);
    const double s = scaled.constraint(i, x);
    CHECK(std::fabs(s * 40.0 - r) <= 1e-15 * std::max(1.0, std::fabs(r)));
  }
}
