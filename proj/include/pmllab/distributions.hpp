#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "pmllab/core.hpp"
#include "pmllab/rng.hpp"

namespace pmllab {

/// Experiment families over k symbols.
Distribution make_uniform(std::size_t k);
/// Half the symbols at 2/(5k), half at 8/(5k). Requires even k.
Distribution make_two_step(std::size_t k);
/// Thirds at 3/(13k), 9/(13k), 27/(13k). Requires k divisible by 3.
Distribution make_three_step(std::size_t k);
/// p_i proportional to (1 - 1/k)^i, i = 1..k.
Distribution make_geometric(std::size_t k);
/// p_i proportional to i^(-s), i = 1..k.
Distribution make_zipf(std::size_t k, double s = 0.5);
/// p_i proportional to (1 - 2/k)^i / i, i = 1..k.
Distribution make_log_series(std::size_t k);

/// Names accepted by make_named: uniform, two_step, three_step, geometric,
/// zipf, log_series.
const std::vector<std::string>& distribution_names();
Distribution make_named(std::string_view name, std::size_t k);

/// Walker/Vose alias table for O(1) draws.
class AliasSampler {
 public:
  explicit AliasSampler(const Distribution& dist);
  std::uint64_t draw(Rng& rng) const;

 private:
  std::vector<double> accept_;
  std::vector<std::uint64_t> alias_;
};

/// n i.i.d. draws from dist; reproducible for a given seed.
Sample draw_sample(const Distribution& dist, std::uint64_t n, RngSeed seed);

}  // namespace pmllab
