#include "pmllab/likelihood.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "assignment_dp.hpp"

namespace pmllab {

double log_profile_probability(const Distribution& dist, const Profile& profile) {
  if (profile.distinct() > dist.size())
    throw InvalidArgument("profile has " + std::to_string(profile.distinct()) + " distinct symbols but the alphabet has " +
                          std::to_string(dist.size()));
  if (profile.n() == 0) return 0.0;
  const detail::AssignmentDp dp(profile);
  const auto wt = dp.weights(dist.probs(), profile.n());
  const double scaled = dp.total(wt, dist.size());
  if (!(scaled > 0.0)) return -std::numeric_limits<double>::infinity();
  return detail::log_profile_coefficient(profile) + wt.log_scale + std::log(scaled);
}

double profile_probability(const Distribution& dist, const Profile& profile) {
  return std::exp(log_profile_probability(dist, profile));
}

double profile_probability_bruteforce(const Distribution& dist, const Profile& profile) {
  const std::size_t k = dist.size();
  const std::uint64_t n = profile.n();
  double sequences = std::pow(static_cast<double>(k), static_cast<double>(n));
  if (sequences > 1e7) throw InstanceTooLarge("k^n exceeds 1e7 sequences");
  if (n == 0) return 1.0;

  std::vector<std::size_t> seq(n, 0);
  std::vector<std::uint64_t> counts(k, 0);
  double total = 0.0;
  while (true) {
    std::fill(counts.begin(), counts.end(), 0);
    double prob = 1.0;
    for (auto x : seq) {
      ++counts[x];
      prob *= dist[x];
    }
    std::map<std::uint64_t, std::uint64_t> prev;
    for (auto c : counts)
      if (c != 0) ++prev[c];
    if (prev == profile.prevalences()) total += prob;

    std::size_t pos = 0;
    while (pos < n && ++seq[pos] == k) seq[pos++] = 0;
    if (pos == n) break;
  }
  return total;
}

std::vector<Profile> enumerate_profiles(std::uint64_t n) {
  if (n == 0) throw InvalidArgument("profile size must be positive");
  if (n > 40) throw InstanceTooLarge("enumerate_profiles is limited to n <= 40");
  std::vector<Profile> out;
  // Partitions as non-increasing part lists, generated in reverse lex order.
  std::vector<std::uint64_t> parts;
  std::function<void(std::uint64_t, std::uint64_t)> rec = [&](std::uint64_t remaining, std::uint64_t max_part) {
    if (remaining == 0) {
      std::map<std::uint64_t, std::uint64_t> prev;
      for (auto p : parts) ++prev[p];
      out.emplace_back(std::move(prev));
      return;
    }
    for (std::uint64_t p = std::min(remaining, max_part); p >= 1; --p) {
      parts.push_back(p);
      rec(remaining - p, p);
      parts.pop_back();
    }
  };
  rec(n, n);
  return out;
}

namespace {

struct Candidate {
  std::vector<double> probs;
  std::vector<double> sorted_desc;
  double value = -1.0;
};

std::vector<double> sorted_desc(std::vector<double> v) {
  std::sort(v.begin(), v.end(), std::greater<>());
  return v;
}

// Relative tolerance under which two objective values count as tied.
constexpr double kTieTolerance = 1e-14;

bool better(double value, const std::vector<double>& sorted, const Candidate& best) {
  if (best.value < 0.0) return true;
  const double scale = std::max(std::abs(value), std::abs(best.value));
  if (value > best.value + kTieTolerance * scale) return true;
  if (value < best.value - kTieTolerance * scale) return false;
  return sorted < best.sorted_desc;
}

bool admissible(const std::vector<double>& probs, SimplexClass cls) {
  if (cls == SimplexClass::kFull) return true;
  const double floor = 1.0 / static_cast<double>(probs.size());
  for (double p : probs)
    if (p > 0.0 && p < floor - 1e-12) return false;
  return true;
}

double evaluate(const std::vector<double>& probs, const Profile& profile) {
  std::size_t support = 0;
  for (double p : probs)
    if (p > 0.0) ++support;
  if (support < profile.distinct()) return 0.0;
  return profile_probability(Distribution::from_weights(probs), profile);
}

void consider(Candidate& best, std::vector<double> probs, const Profile& profile, SimplexClass cls) {
  if (!admissible(probs, cls)) return;
  const double value = evaluate(probs, profile);
  auto sorted = sorted_desc(probs);
  if (better(value, sorted, best)) {
    best.value = value;
    best.sorted_desc = std::move(sorted);
    best.probs = std::move(probs);
  }
}

// Visits every composition of `steps` into k parts whose first part is `first`.
void scan_first(std::size_t first, std::size_t k, std::size_t steps, const Profile& profile, SimplexClass cls,
                Candidate& best) {
  std::vector<std::size_t> parts(k, 0);
  parts[0] = first;
  const std::size_t rest = steps - first;
  const double h = 1.0 / static_cast<double>(steps);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t idx, std::size_t left) {
    if (idx + 1 == k) {
      parts[idx] = left;
      std::vector<double> probs(k);
      for (std::size_t i = 0; i < k; ++i) probs[i] = static_cast<double>(parts[i]) * h;
      consider(best, std::move(probs), profile, cls);
      return;
    }
    for (std::size_t v = 0; v <= left; ++v) {
      parts[idx] = v;
      rec(idx + 1, left - v);
    }
  };
  if (k == 1) {
    if (first == steps) consider(best, {1.0}, profile, cls);
    return;
  }
  rec(1, rest);
}

void check_oracle_size(const Profile& profile, std::size_t k, std::size_t grid_steps) {
  if (k == 0 || grid_steps == 0) throw InvalidArgument("k and grid_steps must be positive");
  if (k > 4 || profile.n() > 8) throw InstanceTooLarge("exact PML oracle is limited to k <= 4 and n <= 8");
  if (profile.distinct() > k) throw InvalidArgument("profile has more distinct symbols than k");
}

}  // namespace

OracleResult oracle_grid_search(const Profile& profile, std::size_t k, std::size_t grid_steps, SimplexClass cls,
                                Execution exec) {
  check_oracle_size(profile, k, grid_steps);
  const auto firsts = static_cast<long>(grid_steps + 1);
  std::vector<Candidate> per_first(grid_steps + 1);
  if (exec == Execution::kParallel) {
#pragma omp parallel for schedule(dynamic)
    for (long f = 0; f < firsts; ++f)
      scan_first(static_cast<std::size_t>(f), k, grid_steps, profile, cls, per_first[static_cast<std::size_t>(f)]);
  } else {
    for (long f = 0; f < firsts; ++f)
      scan_first(static_cast<std::size_t>(f), k, grid_steps, profile, cls, per_first[static_cast<std::size_t>(f)]);
  }
  // Fixed-order merge keeps the parallel result identical to the serial one.
  Candidate best;
  for (auto& c : per_first) {
    if (c.value >= 0.0 && better(c.value, c.sorted_desc, best)) best = std::move(c);
  }
  return OracleResult{Distribution::from_weights(best.probs), best.value};
}

OracleResult exact_pml_oracle(const Profile& profile, std::size_t k, std::size_t grid_steps, SimplexClass cls,
                              Execution exec) {
  auto grid = oracle_grid_search(profile, k, grid_steps, cls, exec);
  Candidate best;
  best.probs.assign(grid.dist.probs().begin(), grid.dist.probs().end());
  best.sorted_desc = sorted_desc(best.probs);
  best.value = grid.probability;

  // Coordinate descent: move `step` of mass between pairs of coordinates
  // while it helps, then halve the step.
  double step = 1.0 / static_cast<double>(grid_steps);
  for (int round = 0; round < 5; ++round) {
    step /= 2.0;
    bool improved = true;
    for (int pass = 0; improved && pass < 200; ++pass) {
      improved = false;
      for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
          if (i == j || best.probs[j] < step) continue;
          auto trial = best.probs;
          trial[i] += step;
          trial[j] -= step;
          if (trial[j] < 1e-15) trial[j] = 0.0;
          if (!admissible(trial, cls)) continue;
          const double value = evaluate(trial, profile);
          if (value > best.value * (1.0 + kTieTolerance)) {
            best.value = value;
            best.probs = std::move(trial);
            best.sorted_desc = sorted_desc(best.probs);
            improved = true;
          }
        }
      }
    }
  }
  auto dist = Distribution::from_weights(best.probs);
  // Re-evaluate on the normalized vector so the value is exactly attained.
  const double value = profile_probability(dist, profile);
  return OracleResult{std::move(dist), value};
}

}  // namespace pmllab
