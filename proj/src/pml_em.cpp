#include "pmllab/pml_em.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "assignment_dp.hpp"
#include "pmllab/likelihood.hpp"

namespace pmllab {

double large_multiplicity_threshold(std::uint64_t n, double tau_multiplier) {
  const double log_n = std::log(static_cast<double>(n));
  return tau_multiplier * log_n * log_n;
}

SplitResult split_large(const Sample& sample, const EmConfig& cfg) {
  SplitResult out;
  if (sample.empty()) return out;
  const double tau = large_multiplicity_threshold(sample.n(), cfg.tau_multiplier);
  const double n = static_cast<double>(sample.n());
  std::map<std::uint64_t, std::uint64_t> kept;
  for (const auto& [symbol, mult] : sample.counts()) {
    if (static_cast<double>(mult) >= tau) {
      out.large_symbols.emplace(symbol, static_cast<double>(mult) / n);
      out.removed_mass += static_cast<double>(mult) / n;
    } else {
      kept.emplace(symbol, mult);
    }
  }
  out.removed_mass = std::min(out.removed_mass, 1.0);
  out.reduced_sample = Sample(std::move(kept));
  return out;
}

double support_estimator_raw(const Profile& profile) {
  const double r = static_cast<double>(profile.n());
  if (profile.n() < 3) throw InvalidArgument("support estimator needs at least 3 draws");
  const double t = std::log(r);
  const auto trials = static_cast<std::uint64_t>(std::ceil(0.5 * std::log2(r * t * t / (t - 1.0))));
  const double theta = 1.0 / (t + 1.0);

  // tail[j] = Pr(L >= j) for L ~ Binomial(trials, theta), by pmf summation.
  std::vector<double> pmf(trials + 1);
  for (std::uint64_t l = 0; l <= trials; ++l) {
    const double log_choose = std::lgamma(static_cast<double>(trials) + 1.0) - std::lgamma(static_cast<double>(l) + 1.0) -
                              std::lgamma(static_cast<double>(trials - l) + 1.0);
    pmf[l] = std::exp(log_choose + static_cast<double>(l) * std::log(theta) +
                      static_cast<double>(trials - l) * std::log1p(-theta));
  }
  std::vector<double> tail(trials + 2, 0.0);
  for (std::uint64_t j = trials + 1; j-- > 0;) tail[j] = tail[j + 1] + pmf[j];

  double estimate = 0.0;
  for (const auto& [j, phi] : profile.prevalences()) {
    const double tail_j = j <= trials ? tail[j] : 0.0;
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    const double coeff = 1.0 - sign * std::pow(t - 1.0, static_cast<double>(j)) * tail_j;
    estimate += coeff * static_cast<double>(phi);
  }
  return estimate;
}

std::uint64_t estimate_support(const Profile& profile, std::size_t max_support) {
  const std::uint64_t distinct = profile.distinct();
  if (profile.n() < 3) return distinct;
  const double raw = std::round(support_estimator_raw(profile));
  const double upper = static_cast<double>(std::max<std::uint64_t>(distinct, max_support));
  return static_cast<std::uint64_t>(std::clamp(raw, static_cast<double>(distinct), upper));
}

std::uint64_t estimate_support(const Sample& sample, std::size_t max_support) {
  return estimate_support(profile_of(sample), max_support);
}

std::vector<double> em_initialization(const Profile& profile, std::size_t support) {
  if (support == 0) throw InvalidArgument("support must be positive");
  const auto mults = profile.multiplicities();
  const double n = static_cast<double>(profile.n());
  const double flat = 1.0 / static_cast<double>(support);
  std::vector<double> q(support, flat);
  if (profile.n() == 0) return q;
  // Observed symbols start at their empirical frequencies (leading points);
  // unused points share a Good-Turing style mass (phi_1 + 1) / (n + 1),
  // capped at one half.
  const std::size_t unseen = support - std::min(support, mults.size());
  const double missing =
      unseen == 0 ? 0.0 : std::min(0.5, (static_cast<double>(profile.prevalence(1)) + 1.0) / (n + 1.0));
  for (std::size_t s = 0; s < mults.size() && s < support; ++s)
    q[s] = (1.0 - missing) * static_cast<double>(mults[s]) / n;
  for (std::size_t s = mults.size(); s < support; ++s) q[s] = missing / static_cast<double>(unseen);
  const double total = compensated_sum(q);
  for (double& v : q) v /= total;
  return q;
}

namespace {

bool use_exact(const Profile& profile, std::size_t support, EStepMode mode) {
  switch (mode) {
    case EStepMode::kExact:
      return true;
    case EStepMode::kMcmc:
      return false;
    case EStepMode::kAuto:
      break;
  }
  return profile.distinct() <= 8 && support <= 10;
}

// Metropolis chain over assignments. assigned[s] is the multiplicity of the
// symbol placed on point s (0 when the point is unused). Swapping the
// contents of two points is a symmetric proposal; neighbour swaps in the
// current probability order are mixed in to keep large multiplicities moving.
class AssignmentChain {
 public:
  AssignmentChain(const Profile& profile, std::size_t support, RngSeed seed)
      : assigned_(support, 0), rng_(seed) {
    const auto mults = profile.multiplicities();
    std::copy(mults.begin(), mults.end(), assigned_.begin());
  }

  std::vector<double> expected_counts(std::span<const double> q, std::size_t sweeps) {
    const std::size_t K = assigned_.size();
    std::vector<double> log_q(K);
    for (std::size_t s = 0; s < K; ++s) log_q[s] = std::log(q[s]);
    std::vector<std::size_t> order(K);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return q[a] > q[b]; });
    std::vector<std::size_t> rank(K);
    for (std::size_t r = 0; r < K; ++r) rank[order[r]] = r;

    std::vector<double> counts(K, 0.0);
    if (K < 2) {
      for (std::size_t s = 0; s < K; ++s) counts[s] = static_cast<double>(assigned_[s]);
      return counts;
    }
    const std::size_t burn_in = std::max<std::size_t>(1, sweeps / 10);
    const std::size_t total_sweeps = sweeps + burn_in;
    constexpr std::uint64_t kNeighbourReach = 4;
    for (std::size_t sweep = 0; sweep < total_sweeps; ++sweep) {
      for (std::size_t step = 0; step < K; ++step) {
        const auto s1 = static_cast<std::size_t>(rng_.below(K));
        std::size_t s2;
        const std::uint64_t pick = rng_.below(4 * kNeighbourReach);
        if (pick < 2 * kNeighbourReach) {
          s2 = static_cast<std::size_t>(rng_.below(K));
        } else {
          const std::uint64_t d = 1 + (pick - 2 * kNeighbourReach) / 2;
          const bool up = (pick & 1U) != 0;
          const std::size_t r1 = rank[s1];
          if (up ? r1 < d : r1 + d >= K) continue;
          s2 = order[up ? r1 - d : r1 + d];
        }
        const auto a1 = assigned_[s1];
        const auto a2 = assigned_[s2];
        if (s1 == s2 || a1 == a2) continue;
        const double log_ratio =
            (static_cast<double>(a2) - static_cast<double>(a1)) * (log_q[s1] - log_q[s2]);
        if (log_ratio >= 0.0 || std::log(rng_.uniform()) < log_ratio) std::swap(assigned_[s1], assigned_[s2]);
      }
      if (sweep >= burn_in) {
        for (std::size_t s = 0; s < K; ++s) counts[s] += static_cast<double>(assigned_[s]);
      }
    }
    for (double& c : counts) c /= static_cast<double>(sweeps);
    return counts;
  }

 private:
  std::vector<std::uint64_t> assigned_;
  Rng rng_;
};

}  // namespace

EmTrace em_pml_traced(const Profile& profile, std::size_t support, const EmConfig& cfg) {
  if (support == 0) throw InvalidArgument("support must be positive");
  if (profile.distinct() > support)
    throw InvalidArgument("support " + std::to_string(support) + " is smaller than the " +
                          std::to_string(profile.distinct()) + " observed symbols");
  std::vector<double> q = em_initialization(profile, support);
  const bool exact = use_exact(profile, support, cfg.estep);
  EmTrace trace{Distribution::from_weights(q), {}, exact};
  if (profile.n() == 0) return trace;

  const double n = static_cast<double>(profile.n());
  std::optional<detail::AssignmentDp> dp;
  std::optional<AssignmentChain> chain;
  if (exact) {
    dp.emplace(profile);
    trace.log_likelihood.push_back(log_profile_probability(trace.dist, profile));
  } else {
    chain.emplace(profile, support, cfg.seed);
  }
  // Pseudo-count that keeps points the chain never visits alive.
  const double kappa = exact ? 0.0 : 1.0 / (static_cast<double>(support) * n);
  const std::size_t sweeps = std::max<std::size_t>(1, cfg.mcmc_sweeps_per_estep);

  for (std::size_t it = 0; it < cfg.em_iterations; ++it) {
    std::vector<double> counts;
    if (exact) {
      counts = dp->expected_counts(dp->weights(q, profile.n()), support, nullptr);
    } else {
      counts = chain->expected_counts(q, sweeps);
    }
    double total = 0.0;
    for (std::size_t s = 0; s < support; ++s) {
      q[s] = counts[s] + kappa;
      total += q[s];
    }
    for (double& v : q) v /= total;
    if (exact) trace.log_likelihood.push_back(log_profile_probability(Distribution::from_weights(q), profile));
  }
  std::vector<double> sorted = q;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  trace.dist = Distribution::from_weights(sorted);
  return trace;
}

Distribution em_pml(const Profile& profile, std::size_t support, const EmConfig& cfg) {
  return em_pml_traced(profile, support, cfg).dist;
}

Sample sample_from_profile(const Profile& profile) {
  std::map<std::uint64_t, std::uint64_t> counts;
  std::uint64_t symbol = 0;
  for (auto mult : profile.multiplicities()) counts.emplace(symbol++, mult);
  return Sample(std::move(counts));
}

Distribution approximate_pml(const Sample& sample, std::optional<std::size_t> k_hint, const EmConfig& cfg) {
  if (sample.n() < 2) throw InvalidArgument("approximate PML needs at least 2 draws");
  const auto split = split_large(sample, cfg);
  const std::size_t large = split.large_symbols.size();
  const Profile reduced = profile_of(split.reduced_sample);
  if (k_hint && *k_hint < large + reduced.distinct())
    throw InvalidArgument("k_hint " + std::to_string(*k_hint) + " is below the " +
                          std::to_string(large + reduced.distinct()) + " observed symbols");

  std::vector<double> out;
  if (!split.reduced_sample.empty()) {
    const std::size_t support =
        k_hint ? *k_hint - large : static_cast<std::size_t>(estimate_support(reduced, cfg.max_support));
    const auto small = em_pml(reduced, support, cfg);
    const double scale = 1.0 - split.removed_mass;
    for (double v : small.probs()) out.push_back(scale * v);
  }
  for (const auto& [symbol, prob] : split.large_symbols) out.push_back(prob);
  if (k_hint && out.size() < *k_hint) out.resize(*k_hint, 0.0);
  return Distribution::from_weights(out);
}

Distribution approximate_pml(const Profile& profile, std::optional<std::size_t> k_hint, const EmConfig& cfg) {
  return approximate_pml(sample_from_profile(profile), k_hint, cfg);
}

}  // namespace pmllab
