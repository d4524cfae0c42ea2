#pragma once

#include "pmllab/core.hpp"
#include "pmllab/pml_em.hpp"

namespace pmllab {

/// Which branch produced the verdict.
enum class TesterBranch { kMaxMultiplicity, kL2Distance, kAccept, kSupportExceedsK };

struct UniformityVerdict {
  bool reject = false;  // true: ||p - uniform||_1 >= epsilon; false: p uniform
  TesterBranch branch = TesterBranch::kAccept;
  double multiplicity_threshold = 0.0;  // 3 max{1, n/k} ln k
  double l2_threshold = 0.0;            // 3 epsilon / (4 sqrt k)
  double l2_distance = 0.0;             // ||pml - uniform||_2 (0 when branch 1 fired)
};

/// PML-based uniformity tester. `pml` is zero-padded (or cut to its k largest
/// entries) to length k. Passing the true distribution instead of a PML
/// estimate gives the oracle mode used to isolate tester logic.
UniformityVerdict t_pml_test(const Sample& sample, std::size_t k, double epsilon, const Distribution& pml);

/// Convenience: computes the approximate PML over k points and tests.
UniformityVerdict t_pml_test(const Sample& sample, std::size_t k, double epsilon, const EmConfig& cfg);

/// ceil(c * sqrt(k ln k) / epsilon^2).
std::uint64_t uniformity_sample_size(std::size_t k, double epsilon, double constant = 8.0);

}  // namespace pmllab
