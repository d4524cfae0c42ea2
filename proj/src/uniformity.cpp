#include "pmllab/uniformity.hpp"

#include <algorithm>
#include <cmath>

namespace pmllab {

UniformityVerdict t_pml_test(const Sample& sample, std::size_t k, double epsilon, const Distribution& pml) {
  if (k < 1) throw InvalidArgument("alphabet size must be positive");
  if (!(epsilon > 0.0 && epsilon < 2.0)) throw InvalidArgument("epsilon must lie in (0, 2)");
  const double kd = static_cast<double>(k);
  const double nd = static_cast<double>(sample.n());

  UniformityVerdict verdict;
  verdict.multiplicity_threshold = 3.0 * std::max(1.0, nd / kd) * std::log(kd);
  verdict.l2_threshold = 3.0 * epsilon / (4.0 * std::sqrt(kd));
  if (static_cast<double>(sample.max_multiplicity()) >= verdict.multiplicity_threshold) {
    verdict.reject = true;
    verdict.branch = TesterBranch::kMaxMultiplicity;
    return verdict;
  }
  verdict.l2_distance = lp_distance(pml.resized(k), Distribution::uniform(k), 2);
  if (verdict.l2_distance >= verdict.l2_threshold) {
    verdict.reject = true;
    verdict.branch = TesterBranch::kL2Distance;
  }
  return verdict;
}

UniformityVerdict t_pml_test(const Sample& sample, std::size_t k, double epsilon, const EmConfig& cfg) {
  if (k < sample.distinct()) {
    // More distinct symbols than k: the sample cannot come from uniform on k.
    UniformityVerdict v;
    v.reject = true;
    v.branch = TesterBranch::kSupportExceedsK;
    return v;
  }
  return t_pml_test(sample, k, epsilon, approximate_pml(sample, k, cfg));
}

std::uint64_t uniformity_sample_size(std::size_t k, double epsilon, double constant) {
  const double kd = static_cast<double>(k);
  return static_cast<std::uint64_t>(std::ceil(constant * std::sqrt(kd * std::log(kd)) / (epsilon * epsilon)));
}

}  // namespace pmllab
