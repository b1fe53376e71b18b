#include "rannlr/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rannlr {

namespace {

void build_cumulative(SamplingDistribution& d) {
  d.cumulative.resize(d.probs.size());
  double sum = 0.0, comp = 0.0;  // Kahan
  for (std::size_t i = 0; i < d.probs.size(); ++i) {
    const double y = d.probs[i] - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
    d.cumulative[i] = sum;
  }
}

// Vose's alias method; one uniform per draw afterwards.
void build_alias(SamplingDistribution& d) {
  const std::size_t m = d.probs.size();
  d.alias_prob.assign(m, 0.0);
  d.alias_index.assign(m, 0);
  std::vector<double> scaled(m);
  for (std::size_t i = 0; i < m; ++i) scaled[i] = d.probs[i] * static_cast<double>(m);

  std::vector<std::uint32_t> small, large;
  small.reserve(m);
  large.reserve(m);
  for (std::size_t i = 0; i < m; ++i)
    (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));

  while (!small.empty() && !large.empty()) {
    const std::uint32_t s = small.back();
    const std::uint32_t l = large.back();
    small.pop_back();
    large.pop_back();
    d.alias_prob[s] = scaled[s];
    d.alias_index[s] = l;
    scaled[l] = (scaled[l] + scaled[s]) - 1.0;
    (scaled[l] < 1.0 ? small : large).push_back(l);
  }
  for (std::uint32_t i : large) d.alias_prob[i] = 1.0;
  for (std::uint32_t i : small) d.alias_prob[i] = 1.0;  // numerical leftovers
}

}  // namespace

SamplingDistribution make_distribution(std::vector<double> probs, SamplingSource source,
                                       bool use_alias) {
  if (probs.empty()) throw std::invalid_argument("empty distribution");
  double sum = 0.0, comp = 0.0;
  for (double p : probs) {
    if (!(p > 0.0) || !std::isfinite(p))
      throw std::invalid_argument("probabilities must be strictly positive");
    const double y = p - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  if (std::fabs(sum - 1.0) > 1e-12)
    throw std::invalid_argument("probabilities must sum to one");

  SamplingDistribution d;
  d.probs = std::move(probs);
  d.source = source;
  if (use_alias)
    build_alias(d);
  else
    build_cumulative(d);
  return d;
}

SamplingDistribution scaled_distribution(const DualState& dual, bool use_alias) {
  std::vector<double> probs(dual.lambda.size());
  for (std::size_t i = 0; i < probs.size(); ++i) probs[i] = dual.lambda[i] / dual.l1_norm;
  SamplingDistribution d;
  d.probs = std::move(probs);
  d.source = SamplingSource::dual_proportional;
  if (use_alias)
    build_alias(d);
  else
    build_cumulative(d);
  return d;
}

SamplingDistribution uniform_distribution(std::size_t m, bool use_alias) {
  if (m == 0) throw std::invalid_argument("empty distribution");
  SamplingDistribution d;
  d.probs.assign(m, 1.0 / static_cast<double>(m));
  d.source = SamplingSource::uniform;
  if (use_alias)
    build_alias(d);
  else
    build_cumulative(d);
  return d;
}

std::size_t draw_index(const SamplingDistribution& dist, Xoshiro256ss& rng) {
  const double u = rng.uniform();
  const std::size_t m = dist.probs.size();
  if (!dist.alias_prob.empty()) {
    const double t = u * static_cast<double>(m);
    std::size_t j = static_cast<std::size_t>(t);
    if (j >= m) j = m - 1;
    const double frac = t - static_cast<double>(j);
    return frac < dist.alias_prob[j] ? j : dist.alias_index[j];
  }
  const double target = u * dist.cumulative.back();
  const auto it = std::upper_bound(dist.cumulative.begin(), dist.cumulative.end(), target);
  std::size_t idx = static_cast<std::size_t>(it - dist.cumulative.begin());
  if (idx >= m) idx = m - 1;
  return idx;
}

double variance_ratio(const SamplingDistribution& p, const SamplingDistribution& q) {
  if (p.probs.size() != q.probs.size())
    throw std::invalid_argument("distributions have different sizes");
  double sum = 0.0, comp = 0.0;  // Kahan
  for (std::size_t i = 0; i < p.probs.size(); ++i) {
    const double term = p.probs[i] * p.probs[i] / q.probs[i];
    const double y = term - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return sum;
}

}  // namespace rannlr
