#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace pmllab {

/// Thrown when an argument violates a documented precondition.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when a guarded computation would exceed its size limit.
class InstanceTooLarge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kProbabilityTolerance = 1e-9;
/// Totals closer to 1 than this are left unnormalized.
inline constexpr double kRenormalizeTolerance = 1e-12;

/// A probability mass function over symbols 0..k-1.
///
/// Entries are non-negative and sum to one. Construction renormalizes when
/// the total is within kProbabilityTolerance of 1 (but not already within
/// kRenormalizeTolerance) and throws when it is further off.
class Distribution {
 public:
  explicit Distribution(std::vector<double> probs);

  /// Normalizes arbitrary non-negative weights (at least one positive).
  static Distribution from_weights(std::span<const double> weights);
  static Distribution uniform(std::size_t k);

  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }
  std::span<const double> probs() const { return probs_; }

  /// Smallest non-zero entry, or 0 for an all-zero vector (never happens).
  double min_positive() const;

  /// Copy padded with zeros (or truncated, tail mass dropped and renormalized)
  /// to exactly k entries.
  Distribution resized(std::size_t k) const;

 private:
  std::vector<double> probs_;
};

/// Multiset of draws: symbol id -> multiplicity, all multiplicities >= 1.
class Sample {
 public:
  Sample() = default;
  explicit Sample(std::map<std::uint64_t, std::uint64_t> counts);

  static Sample from_sequence(std::span<const std::uint64_t> draws);

  const std::map<std::uint64_t, std::uint64_t>& counts() const { return counts_; }
  std::uint64_t n() const { return n_; }
  std::size_t distinct() const { return counts_.size(); }
  std::uint64_t max_multiplicity() const;
  bool empty() const { return n_ == 0; }

 private:
  std::map<std::uint64_t, std::uint64_t> counts_;
  std::uint64_t n_ = 0;
};

/// Prevalence vector: prevalence(i) is the number of symbols seen exactly i
/// times. Stored sparsely; sum_i i * prevalence(i) == n always holds.
class Profile {
 public:
  Profile() = default;
  /// From sparse (multiplicity -> prevalence) pairs; zero prevalences dropped.
  explicit Profile(std::map<std::uint64_t, std::uint64_t> prevalences);
  /// From a dense vector whose element i-1 is the prevalence of multiplicity i.
  static Profile from_dense(std::span<const std::uint64_t> dense);

  std::uint64_t prevalence(std::uint64_t i) const;
  const std::map<std::uint64_t, std::uint64_t>& prevalences() const { return prev_; }
  std::uint64_t n() const { return n_; }
  /// Number of distinct observed symbols, sum_i prevalence(i).
  std::uint64_t distinct() const { return distinct_; }
  std::uint64_t max_multiplicity() const;

  /// Dense vector of length max_multiplicity() (element i-1 = prevalence(i)).
  std::vector<std::uint64_t> dense() const;
  /// Multiplicities of the observed symbols, one entry per symbol, descending.
  std::vector<std::uint64_t> multiplicities() const;

  bool operator==(const Profile&) const = default;

 private:
  std::map<std::uint64_t, std::uint64_t> prev_;
  std::uint64_t n_ = 0;
  std::uint64_t distinct_ = 0;
};

/// The first t prevalences of a profile together with the original n.
struct TruncatedProfile {
  std::uint64_t t = 0;
  std::vector<std::uint64_t> prevalences;  // size t, element i-1 = prevalence(i)
  std::uint64_t n = 0;
};

Profile profile_of(const Sample& sample);
TruncatedProfile truncate_profile(const Profile& profile, std::uint64_t t);

/// l1 (order 1) or l2 (order 2) norm of p - q. Sizes must match.
double lp_distance(const Distribution& p, const Distribution& q, int order);

/// min over relabelings of p of ||p - q||_1; the shorter vector is zero-padded.
double sorted_l1(const Distribution& p, const Distribution& q);

/// 1-Wasserstein distance between the uniform measures on the two probability
/// multisets (each entry carries weight 1/k). Sizes must match.
double wasserstein1_multiset(const Distribution& p, const Distribution& q);

/// tau-truncated relative earth-mover distance: mass p(x) sits at location
/// p(x), ground cost |log((a v tau) / (b v tau))|.
double remd_truncated(const Distribution& p, const Distribution& q, double tau);

/// Kahan-compensated sum.
double compensated_sum(std::span<const double> values);

}  // namespace pmllab
