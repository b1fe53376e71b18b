#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rannlr/bench.hpp"

namespace rannlr {

namespace {

constexpr double kFeasTol = 1e-9;

struct Line {
  double a1, a2, b;  // normalized: a1^2 + a2^2 = 1
};

// Minimize c.x along the boundary line of `cur`, subject to every line in
// `bound` and the first `count` entries of `rest`. Returns the new point.
std::vector<double> solve_on_line(const Line& cur, const std::vector<Line>& bound,
                                  const std::vector<Line>& rest, std::size_t count, double c1,
                                  double c2) {
  const double p0x = cur.a1 * cur.b, p0y = cur.a2 * cur.b;  // closest point to origin
  const double dx = -cur.a2, dy = cur.a1;                   // unit direction along the line

  double tlo = -std::numeric_limits<double>::infinity();
  double thi = std::numeric_limits<double>::infinity();
  auto add = [&](const Line& l) {
    const double dot = l.a1 * dx + l.a2 * dy;
    const double rhs = l.b - (l.a1 * p0x + l.a2 * p0y);
    if (std::fabs(dot) <= 1e-12) {
      if (rhs < -kFeasTol) throw std::runtime_error("infeasible linear program");
      return;
    }
    const double t = rhs / dot;
    if (dot > 0.0)
      thi = std::min(thi, t);
    else
      tlo = std::max(tlo, t);
  };
  for (const Line& l : bound) add(l);
  for (std::size_t j = 0; j < count; ++j) add(rest[j]);

  if (tlo > thi + kFeasTol) throw std::runtime_error("infeasible linear program");
  if (tlo > thi) {
    const double mid = 0.5 * (tlo + thi);
    tlo = thi = mid;
  }

  const double slope = c1 * dx + c2 * dy;
  double t;
  if (slope > 1e-15)
    t = tlo;
  else if (slope < -1e-15)
    t = thi;
  else
    t = std::isfinite(tlo) ? tlo : thi;  // objective flat along the line
  if (!std::isfinite(t)) throw std::runtime_error("unbounded linear program");
  return {p0x + t * dx, p0y + t * dy};
}

}  // namespace

std::pair<std::vector<double>, double> lp_solve_2d(std::vector<HalfPlane> planes, double c1,
                                                   double c2) {
  // artificial bounding box; hitting it at the end means the LP is unbounded
  constexpr double kBig = 1e12;
  const std::vector<Line> bound = {
      {1.0, 0.0, kBig}, {-1.0, 0.0, kBig}, {0.0, 1.0, kBig}, {0.0, -1.0, kBig}};

  std::vector<Line> lines;
  lines.reserve(planes.size());
  for (const HalfPlane& p : planes) {
    const double len = std::hypot(p.a1, p.a2);
    if (len <= 1e-300) {
      if (p.b < -kFeasTol) throw std::runtime_error("infeasible linear program");
      continue;  // vacuous 0 <= b constraint
    }
    lines.push_back({p.a1 / len, p.a2 / len, p.b / len});
  }

  // deterministic shuffle keeps the expected-linear-time behavior reproducible
  Xoshiro256ss rng(0x5EED2D1BULL);
  for (std::size_t i = lines.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng.uniform() * static_cast<double>(i));
    std::swap(lines[i - 1], lines[j < i ? j : i - 1]);
  }

  std::vector<double> x = {c1 > 0.0 ? -kBig : kBig, c2 > 0.0 ? -kBig : kBig};
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const Line& l = lines[i];
    if (l.a1 * x[0] + l.a2 * x[1] <= l.b + kFeasTol) continue;
    x = solve_on_line(l, bound, lines, i, c1, c2);
  }

  if (std::fabs(x[0]) >= kBig * (1.0 - 1e-6) || std::fabs(x[1]) >= kBig * (1.0 - 1e-6))
    throw std::runtime_error("unbounded linear program");
  return {x, c1 * x[0] + c2 * x[1]};
}

LpReference lp_reference(const AlpInstance& alp) {
  std::vector<HalfPlane> planes;
  planes.reserve(alp.m + 4);
  const double theta1_coef = 1.0 - alp.discount;
  for (std::size_t i = 0; i < alp.m; ++i)
    planes.push_back({theta1_coef, alp.dcoef(i), alp.cost(i)});
  planes.push_back({1.0, 0.0, alp.box.hi[0]});
  planes.push_back({-1.0, 0.0, -alp.box.lo[0]});
  planes.push_back({0.0, 1.0, alp.box.hi[1]});
  planes.push_back({0.0, -1.0, -alp.box.lo[1]});

  auto [theta, value] = lp_solve_2d(std::move(planes), -1.0, -alp.eq_s);
  return {theta, -value};
}

}  // namespace rannlr
