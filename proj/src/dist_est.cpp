#include "pmllab/dist_est.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "pmllab/properties.hpp"

namespace pmllab {

double weighted_median(std::span<const double> values, std::span<const double> weights) {
  if (values.size() != weights.size()) throw InvalidArgument("values and weights differ in length");
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw InvalidArgument("weights must be non-negative");
    total += w;
  }
  if (!(total > 0.0)) throw InvalidArgument("weighted median needs a positive total weight");
  const double half = 0.5 * total;
  double cumulative = 0.0;
  for (std::size_t idx = 0; idx < order.size(); ++idx) {
    cumulative += weights[order[idx]];
    // Pool equal values before testing the threshold.
    if (idx + 1 < order.size() && values[order[idx + 1]] == values[order[idx]]) continue;
    if (cumulative >= half) return values[order[idx]];
  }
  return values[order.back()];
}

DenoiseConfig DenoiseConfig::defaults_for(std::uint64_t n) {
  const double log_n = std::log(static_cast<double>(std::max<std::uint64_t>(n, 3)));
  const double log_sq = log_n * log_n;
  DenoiseConfig cfg;
  cfg.mass_to_remove = 1.0 / log_sq;
  cfg.augment_horizon = static_cast<std::uint64_t>(std::ceil(log_sq));
  cfg.empirical_cutoff = log_sq;
  cfg.augment_scale = static_cast<double>(n) / (log_sq * log_sq);
  return cfg;
}

std::uint64_t DenoiseConfig::augment_count(std::uint64_t j) const {
  if (j == 0) return 0;
  return static_cast<std::uint64_t>(std::max(0.0, std::round(augment_scale / static_cast<double>(j))));
}

std::map<std::uint64_t, double> denoise(const Distribution& pml_vector, const Sample& sample,
                                        const DenoiseConfig& cfg) {
  if (!(cfg.mass_to_remove >= 0.0 && cfg.mass_to_remove < 1.0))
    throw InvalidArgument("mass_to_remove must lie in [0, 1)");
  const std::uint64_t n = sample.n();
  const double nd = static_cast<double>(n);

  std::vector<double> v(pml_vector.probs().begin(), pml_vector.probs().end());
  std::sort(v.begin(), v.end(), std::greater<>());
  double to_remove = cfg.mass_to_remove;
  for (double& entry : v) {
    if (to_remove <= 0.0) break;
    const double take = std::min(entry, to_remove);
    entry -= take;
    to_remove -= take;
  }
  for (std::uint64_t j = 1; j <= cfg.augment_horizon; ++j) v.insert(v.end(), cfg.augment_count(j), static_cast<double>(j) / nd);

  std::map<std::uint64_t, double> per_multiplicity;
  for (const auto& [symbol, mult] : sample.counts()) per_multiplicity.emplace(mult, 0.0);

  std::vector<double> log_w(v.size());
  std::vector<double> w(v.size());
  for (auto& [mult, value] : per_multiplicity) {
    const double mu = static_cast<double>(mult);
    if (mu >= cfg.empirical_cutoff) {
      value = mu / nd;
      continue;
    }
    // log bin(n, v, mu); the binomial coefficient is shared by every entry.
    const double log_choose = std::lgamma(nd + 1.0) - std::lgamma(mu + 1.0) - std::lgamma(nd - mu + 1.0);
    double best = -INFINITY;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double x = v[i];
      if (x <= 0.0 || (x >= 1.0 && mult != n)) {
        log_w[i] = -INFINITY;
      } else {
        log_w[i] = log_choose + mu * std::log(x) + (nd - mu) * std::log1p(-std::min(x, 1.0 - 1e-300));
        if (x >= 1.0) log_w[i] = log_choose;
      }
      best = std::max(best, log_w[i]);
    }
    if (!std::isfinite(best)) {
      value = mu / nd;
      continue;
    }
    for (std::size_t i = 0; i < v.size(); ++i) w[i] = std::exp(log_w[i] - best);
    value = weighted_median(v, w);
  }

  std::map<std::uint64_t, double> out;
  for (const auto& [symbol, mult] : sample.counts()) out.emplace(symbol, per_multiplicity.at(mult));
  return out;
}

Distribution estimate_unsorted_l1(const Sample& sample, std::optional<std::size_t> alphabet_size,
                                  const UnsortedL1Config& cfg) {
  if (sample.n() < 2) throw InvalidArgument("unsorted-l1 estimator needs at least 2 draws");
  if (alphabet_size) {
    if (*alphabet_size < sample.distinct() || sample.counts().rbegin()->first >= *alphabet_size)
      throw InvalidArgument("alphabet smaller than the observed support");
  }
  const Distribution v = approximate_pml(sample, alphabet_size, cfg.em);
  const auto assigned = denoise(v, sample, cfg.denoise.value_or(DenoiseConfig::defaults_for(sample.n())));

  if (!alphabet_size) {
    std::vector<double> probs;
    for (const auto& [symbol, value] : assigned) probs.push_back(value);
    return Distribution::from_weights(probs);
  }
  const std::size_t k = *alphabet_size;
  const std::size_t unseen = k - sample.distinct();
  std::vector<double> probs(k, 0.0);
  double observed = 0.0;
  for (const auto& [symbol, value] : assigned) {
    probs[symbol] = value;
    observed += value;
  }
  if (unseen > 0) {
    const double missing = missing_mass_estimate(sample);
    // Unseen symbols get missing/unseen each; when observed + missing < 1 the
    // observed symbols absorb the deficit, otherwise everything is rescaled.
    if (observed + missing < 1.0 && observed > 0.0) {
      const double scale = (1.0 - missing) / observed;
      for (const auto& [symbol, value] : assigned) probs[symbol] = value * scale;
    }
    const double share = missing / static_cast<double>(unseen);
    for (std::size_t x = 0; x < k; ++x)
      if (!sample.counts().contains(x)) probs[x] = share;
  }
  return Distribution::from_weights(probs);
}

TpmlThresholds default_tpml_thresholds(std::uint64_t n) {
  const double nd = static_cast<double>(n);
  TpmlThresholds t;
  t.alpha_n = std::pow(nd, 0.03) + std::pow(nd, 0.01);
  t.beta_n = std::pow(nd, 0.03) + 2.0 * std::pow(nd, 0.01);
  t.gamma_n = t.alpha_n / nd;
  return t;
}

TpmlReport tpml_distribution_report(const Sample& sample, const TpmlThresholds& thresholds, const EmConfig& cfg) {
  if (sample.n() < 2) throw InvalidArgument("TPML estimator needs at least 2 draws");
  if (!(thresholds.alpha_n >= 1.0)) throw InvalidArgument("alpha_n must be at least 1");
  if (!(thresholds.gamma_n > 0.0)) throw InvalidArgument("gamma_n must be positive");
  const double nd = static_cast<double>(sample.n());
  const auto t = static_cast<std::uint64_t>(std::floor(thresholds.alpha_n));

  // The truncated profile sees only multiplicities <= t; heavier symbols form
  // a residual mass fixed at its empirical value.
  std::map<std::uint64_t, std::uint64_t> light;
  std::vector<double> entries;
  double heavy_mass = 0.0;
  for (const auto& [symbol, mult] : sample.counts()) {
    if (mult <= t) {
      light.emplace(symbol, mult);
    } else {
      entries.push_back(static_cast<double>(mult) / nd);
      heavy_mass += static_cast<double>(mult) / nd;
    }
  }
  if (!light.empty()) {
    const Profile light_profile = profile_of(Sample(light));
    const auto support = static_cast<std::size_t>(estimate_support(light_profile, cfg.max_support));
    const auto truncated = em_pml(light_profile, support, cfg);
    const double scale = 1.0 - heavy_mass;
    const double cap = thresholds.beta_n / nd;
    // Entries above beta_n / n stand for frequent symbols; those are already
    // represented by their empirical values.
    for (double v : truncated.probs()) {
      if (scale * v > cap) continue;
      entries.push_back(scale * v);
    }
  }

  double total = compensated_sum(entries);
  while (total < 1.0 - 1e-15) {
    entries.push_back(thresholds.gamma_n);
    total += thresholds.gamma_n;
  }
  TpmlReport report{Distribution::uniform(1), 0.0, false};
  while (total > 1.0 + 1e-15) {
    std::size_t pick = entries.size();
    for (std::size_t i = 0; i < entries.size(); ++i) {
      if (entries[i] <= thresholds.gamma_n && (pick == entries.size() || entries[i] > entries[pick])) pick = i;
    }
    if (pick == entries.size()) {
      // Nothing small enough to drop: shrink the largest entry instead.
      auto largest = std::max_element(entries.begin(), entries.end());
      const double excess = total - 1.0;
      *largest = std::max(0.0, *largest - excess);
      report.shrank_largest = true;
      total = compensated_sum(entries);
      break;
    }
    total -= entries[pick];
    entries.erase(entries.begin() + static_cast<std::ptrdiff_t>(pick));
  }
  total = compensated_sum(entries);
  report.pre_final_total = total;
  if (1.0 - total > 1e-15) entries.push_back(1.0 - total);
  std::sort(entries.begin(), entries.end(), std::greater<>());
  report.dist = Distribution::from_weights(entries);
  return report;
}

Distribution tpml_distribution(const Sample& sample, const TpmlThresholds& thresholds, const EmConfig& cfg) {
  return tpml_distribution_report(sample, thresholds, cfg).dist;
}

}  // namespace pmllab
