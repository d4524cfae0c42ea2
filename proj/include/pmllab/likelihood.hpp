#pragma once

#include <vector>

#include "pmllab/core.hpp"
#include "pmllab/parallel.hpp"

namespace pmllab {

/// Probability that an i.i.d. length-n sample from dist has this profile.
///
/// Computed as n! / prod_i (i!)^phi_i times the monomial symmetric polynomial
/// m_lambda(dist), where m_lambda is summed by a dynamic program over symbols
/// whose state is the number of still-unassigned symbols per multiplicity.
/// Throws InvalidArgument when the profile has more distinct symbols than
/// dist has entries, InstanceTooLarge when the state space exceeds 2^24.
double profile_probability(const Distribution& dist, const Profile& profile);

/// Natural log of profile_probability; -inf when the profile is impossible.
double log_profile_probability(const Distribution& dist, const Profile& profile);

/// Direct sum over all k^n sequences. Requires k^n <= 1e7.
double profile_probability_bruteforce(const Distribution& dist, const Profile& profile);

/// All profiles of size n (one per integer partition of n), in reverse
/// lexicographic order of the partitions. Requires n <= 40.
std::vector<Profile> enumerate_profiles(std::uint64_t n);

/// Candidate set for the exact oracle.
enum class SimplexClass {
  kFull,         // every distribution on k symbols
  kFlooredAtInvK,  // non-zero entries are at least 1/k
};

struct OracleResult {
  Distribution dist;
  double probability = 0.0;
};

/// Exhaustive grid search over compositions of grid_steps into k parts,
/// followed by coordinate-descent refinement (5 step-halving rounds).
/// The returned probability is attained by the returned distribution, so it
/// is a certified lower bound on max_p p(profile). Ties go to the
/// lexicographically smallest descending-sorted vector.
/// Requires k <= 4 and n <= 8.
OracleResult exact_pml_oracle(const Profile& profile, std::size_t k, std::size_t grid_steps = 60,
                              SimplexClass cls = SimplexClass::kFull, Execution exec = Execution::kParallel);

/// Grid phase only (no refinement); exposed so the serial and OpenMP kernels
/// can be compared directly.
OracleResult oracle_grid_search(const Profile& profile, std::size_t k, std::size_t grid_steps, SimplexClass cls,
                                Execution exec);

}  // namespace pmllab
