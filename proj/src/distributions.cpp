#include "pmllab/distributions.hpp"

#include <cmath>

namespace pmllab {

namespace {

void require_positive(std::size_t k) {
  if (k == 0) throw InvalidArgument("alphabet size must be positive");
}

}  // namespace

Distribution make_uniform(std::size_t k) { return Distribution::uniform(k); }

Distribution make_two_step(std::size_t k) {
  require_positive(k);
  if (k % 2 != 0) throw InvalidArgument("two-step distribution needs an even alphabet size");
  const double kd = static_cast<double>(k);
  std::vector<double> w(k);
  for (std::size_t i = 0; i < k; ++i) w[i] = i < k / 2 ? 2.0 / (5.0 * kd) : 8.0 / (5.0 * kd);
  return Distribution::from_weights(w);
}

Distribution make_three_step(std::size_t k) {
  require_positive(k);
  if (k % 3 != 0) throw InvalidArgument("three-step distribution needs an alphabet size divisible by 3");
  const double kd = static_cast<double>(k);
  std::vector<double> w(k);
  for (std::size_t i = 0; i < k; ++i) {
    const double level = i < k / 3 ? 3.0 : (i < 2 * k / 3 ? 9.0 : 27.0);
    w[i] = level / (13.0 * kd);
  }
  return Distribution::from_weights(w);
}

Distribution make_geometric(std::size_t k) {
  require_positive(k);
  const double g = 1.0 / static_cast<double>(k);
  std::vector<double> w(k);
  for (std::size_t i = 1; i <= k; ++i) w[i - 1] = std::pow(1.0 - g, static_cast<double>(i));
  // k == 1 gives g == 1 and a zero weight; the single point carries all mass.
  if (k == 1) w[0] = 1.0;
  return Distribution::from_weights(w);
}

Distribution make_zipf(std::size_t k, double s) {
  require_positive(k);
  std::vector<double> w(k);
  for (std::size_t i = 1; i <= k; ++i) w[i - 1] = std::pow(static_cast<double>(i), -s);
  return Distribution::from_weights(w);
}

Distribution make_log_series(std::size_t k) {
  require_positive(k);
  const double gamma = 2.0 / static_cast<double>(k);
  std::vector<double> w(k);
  for (std::size_t i = 1; i <= k; ++i) {
    const double base = 1.0 - gamma;
    w[i - 1] = base > 0.0 ? std::pow(base, static_cast<double>(i)) / static_cast<double>(i) : 0.0;
  }
  // k <= 2 makes 1 - gamma <= 0; fall back to the 1/i shape.
  if (gamma >= 1.0) {
    for (std::size_t i = 1; i <= k; ++i) w[i - 1] = 1.0 / static_cast<double>(i);
  }
  return Distribution::from_weights(w);
}

const std::vector<std::string>& distribution_names() {
  static const std::vector<std::string> names{"uniform", "two_step", "three_step", "geometric", "zipf", "log_series"};
  return names;
}

Distribution make_named(std::string_view name, std::size_t k) {
  if (name == "uniform") return make_uniform(k);
  if (name == "two_step") return make_two_step(k);
  if (name == "three_step") return make_three_step(k);
  if (name == "geometric") return make_geometric(k);
  if (name == "zipf") return make_zipf(k, 0.5);
  if (name == "log_series") return make_log_series(k);
  throw InvalidArgument("unknown distribution '" + std::string(name) + "'");
}

AliasSampler::AliasSampler(const Distribution& dist) : accept_(dist.size()), alias_(dist.size()) {
  const std::size_t k = dist.size();
  std::vector<double> scaled(k);
  std::vector<std::uint64_t> small;
  std::vector<std::uint64_t> large;
  for (std::size_t i = 0; i < k; ++i) {
    scaled[i] = dist[i] * static_cast<double>(k);
    (scaled[i] < 1.0 ? small : large).push_back(i);
  }
  while (!small.empty() && !large.empty()) {
    const auto s = small.back();
    small.pop_back();
    const auto l = large.back();
    accept_[s] = scaled[s];
    alias_[s] = l;
    scaled[l] = (scaled[l] + scaled[s]) - 1.0;
    if (scaled[l] < 1.0) {
      large.pop_back();
      small.push_back(l);
    }
  }
  // Leftovers are 1 up to rounding.
  for (auto i : large) {
    accept_[i] = 1.0;
    alias_[i] = i;
  }
  for (auto i : small) {
    accept_[i] = 1.0;
    alias_[i] = i;
  }
}

std::uint64_t AliasSampler::draw(Rng& rng) const {
  const auto column = rng.below(accept_.size());
  return rng.uniform() < accept_[column] ? column : alias_[column];
}

Sample draw_sample(const Distribution& dist, std::uint64_t n, RngSeed seed) {
  if (n == 0) throw InvalidArgument("sample size must be positive");
  const AliasSampler sampler(dist);
  Rng rng(seed);
  std::vector<std::uint64_t> counts(dist.size(), 0);
  for (std::uint64_t i = 0; i < n; ++i) ++counts[sampler.draw(rng)];
  std::map<std::uint64_t, std::uint64_t> sparse;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] != 0) sparse.emplace_hint(sparse.end(), i, counts[i]);
  }
  return Sample(std::move(sparse));
}

}  // namespace pmllab
