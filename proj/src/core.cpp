#include "pmllab/core.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

namespace pmllab {

double compensated_sum(std::span<const double> values) {
  double sum = 0.0;
  double carry = 0.0;
  for (double v : values) {
    const double y = v - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  return sum;
}

Distribution::Distribution(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.empty()) throw InvalidArgument("distribution must have at least one symbol");
  for (double p : probs_) {
    if (!(p >= 0.0) || !std::isfinite(p))
      throw InvalidArgument("distribution entries must be finite and non-negative");
  }
  const double total = compensated_sum(probs_);
  if (std::abs(total - 1.0) > kProbabilityTolerance)
    throw InvalidArgument("distribution entries sum to " + std::to_string(total) + ", not 1");
  // Vectors already normalized to a few ulps are kept verbatim so that a
  // written PML file reads back to the same bits.
  if (std::abs(total - 1.0) > kRenormalizeTolerance) {
    for (double& p : probs_) p /= total;
  }
}

Distribution Distribution::from_weights(std::span<const double> weights) {
  std::vector<double> probs(weights.begin(), weights.end());
  for (double w : probs) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw InvalidArgument("weights must be finite and non-negative");
  }
  const double total = compensated_sum(probs);
  if (!(total > 0.0)) throw InvalidArgument("weights must have positive total");
  for (double& p : probs) p /= total;
  return Distribution(std::move(probs));
}

Distribution Distribution::uniform(std::size_t k) {
  if (k == 0) throw InvalidArgument("alphabet size must be positive");
  return Distribution(std::vector<double>(k, 1.0 / static_cast<double>(k)));
}

double Distribution::min_positive() const {
  double best = 0.0;
  for (double p : probs_) {
    if (p > 0.0 && (best == 0.0 || p < best)) best = p;
  }
  return best;
}

Distribution Distribution::resized(std::size_t k) const {
  if (k == 0) throw InvalidArgument("alphabet size must be positive");
  std::vector<double> out(probs_);
  if (k >= out.size()) {
    out.resize(k, 0.0);
    return Distribution(std::move(out));
  }
  // Labels carry no meaning here; keep the k largest entries.
  std::sort(out.begin(), out.end(), std::greater<>());
  out.resize(k);
  return from_weights(out);
}

Sample::Sample(std::map<std::uint64_t, std::uint64_t> counts) : counts_(std::move(counts)) {
  for (const auto& [symbol, mult] : counts_) {
    if (mult == 0) throw InvalidArgument("sample multiplicities must be positive");
    n_ += mult;
  }
}

Sample Sample::from_sequence(std::span<const std::uint64_t> draws) {
  std::map<std::uint64_t, std::uint64_t> counts;
  for (auto d : draws) ++counts[d];
  return Sample(std::move(counts));
}

std::uint64_t Sample::max_multiplicity() const {
  std::uint64_t best = 0;
  for (const auto& [symbol, mult] : counts_) best = std::max(best, mult);
  return best;
}

Profile::Profile(std::map<std::uint64_t, std::uint64_t> prevalences) {
  for (const auto& [i, phi] : prevalences) {
    if (i == 0) throw InvalidArgument("profile multiplicities start at 1");
    if (phi == 0) continue;
    prev_.emplace(i, phi);
    n_ += i * phi;
    distinct_ += phi;
  }
}

Profile Profile::from_dense(std::span<const std::uint64_t> dense) {
  std::map<std::uint64_t, std::uint64_t> sparse;
  for (std::size_t i = 0; i < dense.size(); ++i) {
    if (dense[i] != 0) sparse.emplace(i + 1, dense[i]);
  }
  return Profile(std::move(sparse));
}

std::uint64_t Profile::prevalence(std::uint64_t i) const {
  auto it = prev_.find(i);
  return it == prev_.end() ? 0 : it->second;
}

std::uint64_t Profile::max_multiplicity() const { return prev_.empty() ? 0 : prev_.rbegin()->first; }

std::vector<std::uint64_t> Profile::dense() const {
  std::vector<std::uint64_t> out(max_multiplicity(), 0);
  for (const auto& [i, phi] : prev_) out[i - 1] = phi;
  return out;
}

std::vector<std::uint64_t> Profile::multiplicities() const {
  std::vector<std::uint64_t> out;
  out.reserve(distinct_);
  for (auto it = prev_.rbegin(); it != prev_.rend(); ++it) out.insert(out.end(), it->second, it->first);
  return out;
}

Profile profile_of(const Sample& sample) {
  std::map<std::uint64_t, std::uint64_t> prev;
  for (const auto& [symbol, mult] : sample.counts()) ++prev[mult];
  return Profile(std::move(prev));
}

TruncatedProfile truncate_profile(const Profile& profile, std::uint64_t t) {
  if (t == 0) throw InvalidArgument("truncation index must be positive");
  TruncatedProfile out;
  out.t = t;
  out.n = profile.n();
  out.prevalences.assign(t, 0);
  for (const auto& [i, phi] : profile.prevalences()) {
    if (i > t) break;
    out.prevalences[i - 1] = phi;
  }
  return out;
}

namespace {

void require_same_size(const Distribution& p, const Distribution& q) {
  if (p.size() != q.size())
    throw InvalidArgument("alphabet sizes differ: " + std::to_string(p.size()) + " vs " + std::to_string(q.size()));
}

std::vector<double> sorted_desc_padded(const Distribution& d, std::size_t k) {
  std::vector<double> out(d.probs().begin(), d.probs().end());
  out.resize(k, 0.0);
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

}  // namespace

double lp_distance(const Distribution& p, const Distribution& q, int order) {
  require_same_size(p, q);
  if (order != 1 && order != 2) throw InvalidArgument("lp_distance supports order 1 or 2");
  std::vector<double> terms(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double d = std::abs(p[i] - q[i]);
    terms[i] = order == 1 ? d : d * d;
  }
  const double s = compensated_sum(terms);
  return order == 1 ? s : std::sqrt(s);
}

double sorted_l1(const Distribution& p, const Distribution& q) {
  const std::size_t k = std::max(p.size(), q.size());
  const auto a = sorted_desc_padded(p, k);
  const auto b = sorted_desc_padded(q, k);
  std::vector<double> terms(k);
  for (std::size_t i = 0; i < k; ++i) terms[i] = std::abs(a[i] - b[i]);
  return compensated_sum(terms);
}

double wasserstein1_multiset(const Distribution& p, const Distribution& q) {
  require_same_size(p, q);
  // Equal-weight atoms: the quantile coupling pairs the i-th smallest values.
  std::vector<double> a(p.probs().begin(), p.probs().end());
  std::vector<double> b(q.probs().begin(), q.probs().end());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double w = 1.0 / static_cast<double>(a.size());
  std::vector<double> terms(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) terms[i] = w * std::abs(a[i] - b[i]);
  return compensated_sum(terms);
}

double remd_truncated(const Distribution& p, const Distribution& q, double tau) {
  if (!(tau >= 0.0 && tau <= 1.0)) throw InvalidArgument("tau must lie in [0, 1]");
  // Atoms (location, mass); the ground cost is |g(a) - g(b)| for the monotone
  // map g(y) = log(max(y, tau)), so the quantile coupling is optimal.
  auto atoms = [](const Distribution& d) {
    std::vector<double> out;
    for (double v : d.probs())
      if (v > 0.0) out.push_back(v);
    std::sort(out.begin(), out.end());
    return out;
  };
  const auto a = atoms(p);
  const auto b = atoms(q);
  auto loc = [tau](double y) { return std::log(std::max(y, tau)); };

  std::size_t i = 0, j = 0;
  double left_a = a.empty() ? 0.0 : a[0];
  double left_b = b.empty() ? 0.0 : b[0];
  std::vector<double> terms;
  terms.reserve(a.size() + b.size());
  while (i < a.size() && j < b.size()) {
    const double m = std::min(left_a, left_b);
    terms.push_back(m * std::abs(loc(a[i]) - loc(b[j])));
    left_a -= m;
    left_b -= m;
    if (left_a <= 0.0) {
      if (++i < a.size()) left_a = a[i];
    }
    if (left_b <= 0.0) {
      if (++j < b.size()) left_b = b[j];
    }
  }
  return compensated_sum(terms);
}

}  // namespace pmllab
