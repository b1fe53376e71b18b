#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "rannlr/problem.hpp"
#include "rannlr/rng.hpp"

namespace rannlr {

enum class SamplingSource { dual_proportional, uniform, custom };

// Discrete distribution over constraint indices. Draws use the inclusive
// cumulative sums by default (binary search); an alias table can be built
// instead for very long inner runs.
struct SamplingDistribution {
  std::vector<double> probs;
  std::vector<double> cumulative;  // empty when the alias table is used
  SamplingSource source = SamplingSource::custom;
  std::vector<double> alias_prob;  // alias acceptance thresholds (empty unless requested)
  std::vector<std::uint32_t> alias_index;
};

SamplingDistribution make_distribution(std::vector<double> probs, SamplingSource source,
                                       bool use_alias = false);

// dual-proportional distribution: probs_i = lambda_i / |lambda|_1
SamplingDistribution scaled_distribution(const DualState& d, bool use_alias = false);

SamplingDistribution uniform_distribution(std::size_t m, bool use_alias = false);

// one uniform variate per draw for both structures
std::size_t draw_index(const SamplingDistribution& dist, Xoshiro256ss& rng);

// r = sum_i p_i^2 / q_i, the rate penalty for sampling from q instead of p
double variance_ratio(const SamplingDistribution& p, const SamplingDistribution& q);

}  // namespace rannlr
