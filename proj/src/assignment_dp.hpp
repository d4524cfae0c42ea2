#pragma once

// Dynamic program over injective assignments of observed symbols to support
// points. Symbols sharing a multiplicity are interchangeable, so the state is
// the number of still-unassigned symbols in each multiplicity group.

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "pmllab/core.hpp"

namespace pmllab::detail {

class AssignmentDp {
 public:
  static constexpr std::size_t kMaxStates = std::size_t{1} << 24;

  explicit AssignmentDp(const Profile& profile) {
    std::size_t stride = 1;
    for (const auto& [mult, count] : profile.prevalences()) {
      mult_.push_back(mult);
      count_.push_back(count);
      stride_.push_back(stride);
      if (count + 1 > kMaxStates / stride) throw InstanceTooLarge("assignment state space too large");
      stride *= count + 1;
    }
    states_ = stride;
    full_ = 0;
    for (std::size_t g = 0; g < mult_.size(); ++g) full_ += count_[g] * stride_[g];
  }

  std::size_t groups() const { return mult_.size(); }
  std::uint64_t multiplicity(std::size_t g) const { return mult_[g]; }

  /// Weight table w[s][g] = (q_s / q_max)^mult_g; log_scale = n * log(q_max).
  struct Weights {
    std::vector<double> w;  // row-major, points x groups
    double log_scale = 0.0;
  };

  Weights weights(std::span<const double> q, std::uint64_t n) const {
    double q_max = 0.0;
    for (double v : q) q_max = std::max(q_max, v);
    Weights out;
    out.w.assign(q.size() * groups(), 0.0);
    out.log_scale = q_max > 0.0 ? static_cast<double>(n) * std::log(q_max) : -INFINITY;
    if (q_max <= 0.0) return out;
    for (std::size_t s = 0; s < q.size(); ++s) {
      const double ratio = q[s] / q_max;
      for (std::size_t g = 0; g < groups(); ++g)
        out.w[s * groups() + g] = std::pow(ratio, static_cast<double>(mult_[g]));
    }
    return out;
  }

  /// Scaled sum over injective assignments (each unordered within a group).
  double total(const Weights& wt, std::size_t points) const {
    std::vector<double> cur(states_, 0.0), next(states_, 0.0);
    cur[full_] = 1.0;
    for (std::size_t s = 0; s < points; ++s) {
      push(cur, next, &wt.w[s * groups()]);
      std::swap(cur, next);
    }
    return cur[0];
  }

  /// Expected assigned multiplicity per point under the posterior over
  /// assignments; returns the scaled normalizer through `z`.
  std::vector<double> expected_counts(const Weights& wt, std::size_t points, double* z) const {
    const std::size_t G = groups();
    std::vector<std::vector<double>> fwd(points + 1, std::vector<double>(states_, 0.0));
    fwd[0][full_] = 1.0;
    for (std::size_t s = 0; s < points; ++s) push(fwd[s], fwd[s + 1], &wt.w[s * G]);

    std::vector<double> bwd(states_, 0.0), prev(states_, 0.0);
    bwd[0] = 1.0;
    std::vector<double> counts(points, 0.0);
    const double norm = fwd[points][0];
    if (z != nullptr) *z = norm;
    if (!(norm > 0.0)) return counts;
    for (std::size_t s = points; s-- > 0;) {
      const double* w = &wt.w[s * G];
      const auto& f = fwd[s];
      double acc = 0.0;
      for (std::size_t st = 0; st < states_; ++st) {
        if (f[st] == 0.0) continue;
        for (std::size_t g = 0; g < G; ++g) {
          if (remaining(st, g) == 0) continue;
          acc += static_cast<double>(mult_[g]) * f[st] * w[g] * bwd[st - stride_[g]];
        }
      }
      counts[s] = acc / norm;
      // bwd_s[st] = bwd_{s+1}[st] + sum_g w_g * bwd_{s+1}[st - stride_g]
      for (std::size_t st = 0; st < states_; ++st) {
        double v = bwd[st];
        for (std::size_t g = 0; g < G; ++g) {
          if (remaining(st, g) > 0) v += w[g] * bwd[st - stride_[g]];
        }
        prev[st] = v;
      }
      std::swap(bwd, prev);
    }
    return counts;
  }

 private:
  std::uint64_t remaining(std::size_t state, std::size_t g) const {
    return (state / stride_[g]) % (count_[g] + 1);
  }

  void push(const std::vector<double>& cur, std::vector<double>& next, const double* w) const {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t st = 0; st < states_; ++st) {
      const double v = cur[st];
      if (v == 0.0) continue;
      next[st] += v;
      for (std::size_t g = 0; g < groups(); ++g) {
        if (remaining(st, g) > 0) next[st - stride_[g]] += v * w[g];
      }
    }
  }

  std::vector<std::uint64_t> mult_;
  std::vector<std::uint64_t> count_;
  std::vector<std::size_t> stride_;
  std::size_t states_ = 1;
  std::size_t full_ = 0;
};

/// log( n! / prod_i (i!)^phi_i )
inline double log_profile_coefficient(const Profile& profile) {
  double out = std::lgamma(static_cast<double>(profile.n()) + 1.0);
  for (const auto& [mult, count] : profile.prevalences())
    out -= static_cast<double>(count) * std::lgamma(static_cast<double>(mult) + 1.0);
  return out;
}

}  // namespace pmllab::detail
