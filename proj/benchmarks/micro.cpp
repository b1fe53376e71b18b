#include <benchmark/benchmark.h>

#include <vector>

#include "rannlr/bench.hpp"
#include "rannlr/solver.hpp"

using namespace rannlr;

namespace {

const RescalingFunction kPsi = make_extrapolated(RescalingKind::exp_extrapolated, -0.5);

SamplingDistribution skewed_distribution(std::size_t m, bool use_alias) {
  std::vector<double> lam(m);
  Xoshiro256ss rng(7);
  for (double& v : lam) v = 1e-4 + (rng.uniform() < 0.01 ? rng.uniform() : 1e-3 * rng.uniform());
  return scaled_distribution(DualState::from(lam), use_alias);
}

void BM_psi_eval(benchmark::State& state) {
  double t = -5.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(psi(kPsi, t));
    t += 1e-4;
    if (t > 5.0) t = -5.0;
  }
}
BENCHMARK(BM_psi_eval);

void BM_component_operator(benchmark::State& state) {
  const SipInstance p = build_sip(10000);
  const DualState d = DualState::from(std::vector<double>(p.m, 1e-4));
  const std::vector<double> x{0.1, 0.15};
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(component_operator(p, kPsi, i, x, d, 100.0));
    i = (i + 1) % p.m;
  }
}
BENCHMARK(BM_component_operator);

void BM_full_gradient(benchmark::State& state) {
  const SipInstance p = build_sip(10000);
  const DualState d = DualState::from(std::vector<double>(p.m, 1e-4));
  const std::vector<double> x{0.1, 0.15};
  for (auto _ : state)
    benchmark::DoNotOptimize(grad_augmented_lagrangian(p, kPsi, x, d, 100.0));
}
BENCHMARK(BM_full_gradient);

void BM_dual_update(benchmark::State& state) {
  const SipInstance p = build_sip(10000);
  const DualState d = DualState::from(std::vector<double>(p.m, 1e-4));
  const std::vector<double> x{0.1, 0.15};
  for (auto _ : state) benchmark::DoNotOptimize(dual_update(d, x, p, kPsi, 100.0));
}
BENCHMARK(BM_dual_update);

void BM_draw_cumulative(benchmark::State& state) {
  const SamplingDistribution dist = skewed_distribution(10000, false);
  Xoshiro256ss rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(draw_index(dist, rng));
}
BENCHMARK(BM_draw_cumulative);

void BM_draw_alias(benchmark::State& state) {
  const SamplingDistribution dist = skewed_distribution(10000, true);
  Xoshiro256ss rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(draw_index(dist, rng));
}
BENCHMARK(BM_draw_alias);

void BM_estimator_anchored(benchmark::State& state) {
  const SipInstance p = build_sip(10000);
  const DualState d = DualState::from(std::vector<double>(p.m, 1e-4));
  const SamplingDistribution q = scaled_distribution(d);
  const std::vector<double> y{0.1, 0.15};
  const EstimatorState st = make_anchored_state(p, kPsi, {0.12, 0.14}, d, 100.0);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(gradient_estimator(p, kPsi, y, st, i, d, q, 100.0));
    i = (i + 1) % p.m;
  }
}
BENCHMARK(BM_estimator_anchored);

void BM_build_alp_desk(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(build_alp(0.2, 600.0));
}
BENCHMARK(BM_build_alp_desk);

void BM_lp_reference_desk(benchmark::State& state) {
  const AlpInstance p = build_alp(0.2, 600.0);
  for (auto _ : state) benchmark::DoNotOptimize(lp_reference(p));
}
BENCHMARK(BM_lp_reference_desk);

}  // namespace

BENCHMARK_MAIN();
