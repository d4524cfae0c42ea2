#pragma once

#include <map>
#include <optional>
#include <vector>

#include "pmllab/core.hpp"
#include "pmllab/rng.hpp"

namespace pmllab {

enum class EStepMode {
  kAuto,   // exact when the profile has <= 8 distinct symbols and K <= 10
  kExact,  // forward-backward over injective assignments
  kMcmc,   // Metropolis sampling over assignments
};

struct EmConfig {
  std::size_t em_iterations = 30;
  std::size_t max_support = 10000;
  std::size_t mcmc_sweeps_per_estep = 60;
  /// Large-multiplicity threshold is tau_multiplier * (ln n)^2.
  double tau_multiplier = 1.5;
  RngSeed seed{0};
  EStepMode estep = EStepMode::kAuto;
};

struct SplitResult {
  std::map<std::uint64_t, double> large_symbols;  // symbol -> mu_x / n
  Sample reduced_sample;
  double removed_mass = 0.0;
};

/// Moves symbols with multiplicity >= tau_multiplier * (ln n)^2 out of the
/// sample, recording their empirical probabilities.
SplitResult split_large(const Sample& sample, const EmConfig& cfg);

/// Large-multiplicity threshold tau_multiplier * (ln n)^2.
double large_multiplicity_threshold(std::uint64_t n, double tau_multiplier);

/// Support-size estimate for the sample, clamped to
/// [distinct, max(distinct, max_support)]. Falls back to the distinct count
/// when the sample has fewer than 3 draws.
std::uint64_t estimate_support(const Sample& sample, std::size_t max_support = 10000);
std::uint64_t estimate_support(const Profile& profile, std::size_t max_support = 10000);

/// Unrounded, unclamped estimator value; requires n >= 3.
double support_estimator_raw(const Profile& profile);

/// Starting point of the EM iteration over `support` points.
std::vector<double> em_initialization(const Profile& profile, std::size_t support);

struct EmTrace {
  Distribution dist;
  /// log p(profile) before the first and after every iteration; only filled
  /// when the exact E-step is used.
  std::vector<double> log_likelihood;
  bool exact = false;
};

/// Approximate PML over `support` points by EM on the latent assignment of
/// observed symbols to support points. Output entries are sorted descending.
/// Throws InvalidArgument when support < profile.distinct().
Distribution em_pml(const Profile& profile, std::size_t support, const EmConfig& cfg);
EmTrace em_pml_traced(const Profile& profile, std::size_t support, const EmConfig& cfg);

/// Full pipeline: split large multiplicities, pick the output support size
/// (k_hint - |large| when given), run EM on the rest, reassemble.
Distribution approximate_pml(const Sample& sample, std::optional<std::size_t> k_hint, const EmConfig& cfg);

/// Same pipeline starting from a profile alone (labels are irrelevant).
Distribution approximate_pml(const Profile& profile, std::optional<std::size_t> k_hint, const EmConfig& cfg);

/// Sample whose symbols 0, 1, ... carry the profile's multiplicities.
Sample sample_from_profile(const Profile& profile);

}  // namespace pmllab
