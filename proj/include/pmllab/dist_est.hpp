#pragma once

#include <map>
#include <optional>
#include <span>
#include <vector>

#include "pmllab/core.hpp"
#include "pmllab/pml_em.hpp"

namespace pmllab {

/// Smallest value v whose cumulative weight (values in ascending order,
/// equal values pooled) reaches half the total. Throws on zero total weight.
double weighted_median(std::span<const double> values, std::span<const double> weights);

struct DenoiseConfig {
  double mass_to_remove = 0.0;       // (ln n)^-2
  std::uint64_t augment_horizon = 0; // ceil((ln n)^2)
  double empirical_cutoff = 0.0;     // (ln n)^2
  double augment_scale = 0.0;        // augment_count(j) = round(augment_scale / j), scale = n / (ln n)^4

  static DenoiseConfig defaults_for(std::uint64_t n);
  std::uint64_t augment_count(std::uint64_t j) const;
};

/// Per-observed-symbol probabilities (not normalized) from a PML vector:
/// trim mass from the largest entries, augment with small atoms j/n, then give
/// each symbol either its empirical frequency (multiplicity >= cutoff) or the
/// binomial-likelihood-weighted median of the vector.
std::map<std::uint64_t, double> denoise(const Distribution& pml_vector, const Sample& sample, const DenoiseConfig& cfg);

struct UnsortedL1Config {
  EmConfig em;
  std::optional<DenoiseConfig> denoise;  // defaults_for(n) when empty
};

/// Distribution estimate over symbols 0..alphabet_size-1 (or over the observed
/// symbols, in ascending order, when no alphabet is given). Unseen symbols
/// share the missing-mass estimate equally.
Distribution estimate_unsorted_l1(const Sample& sample, std::optional<std::size_t> alphabet_size,
                                  const UnsortedL1Config& cfg = {});

struct TpmlThresholds {
  double alpha_n = 0.0;  // truncation index (floored)
  double beta_n = 0.0;   // multiplicities above this use empirical values
  double gamma_n = 0.0;  // filler atom size
};

/// alpha_n = n^.03 + n^.01, beta_n = n^.03 + 2 n^.01, gamma_n = alpha_n / n.
TpmlThresholds default_tpml_thresholds(std::uint64_t n);

struct TpmlReport {
  Distribution dist;
  double pre_final_total = 0.0;
  bool shrank_largest = false;  // no entry <= gamma_n was available to remove
};

/// Truncated-profile PML combined with empirical estimates for frequent
/// symbols, then padded/trimmed with gamma_n atoms to total mass 1.
Distribution tpml_distribution(const Sample& sample, const TpmlThresholds& thresholds, const EmConfig& cfg);
TpmlReport tpml_distribution_report(const Sample& sample, const TpmlThresholds& thresholds, const EmConfig& cfg);

}  // namespace pmllab
