#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "pmllab/distributions.hpp"
#include "pmllab/likelihood.hpp"
#include "pmllab/pml_em.hpp"
#include "pmllab/properties.hpp"

using namespace pmllab;

namespace {

Profile P(std::map<std::uint64_t, std::uint64_t> m) { return Profile(std::move(m)); }

EmConfig exact_cfg(std::size_t iters = 30) {
  EmConfig cfg;
  cfg.em_iterations = iters;
  cfg.estep = EStepMode::kExact;
  return cfg;
}

// Direct evaluation of the support estimator with a long-double binomial tail.
double support_formula(const Profile& phi) {
  const long double r = phi.n();
  const long double t = std::log(r);
  const auto trials = static_cast<std::uint64_t>(std::ceil(0.5L * std::log2(r * t * t / (t - 1))));
  const long double theta = 1 / (t + 1);
  long double total = 0;
  for (const auto& [j, count] : phi.prevalences()) {
    long double tail = 0;
    for (std::uint64_t l = j; l <= trials; ++l) tail += oracle::binomial_pmf(trials, l, theta);
    long double coeff = 1 - std::pow(-(t - 1), static_cast<long double>(j)) * tail;
    total += coeff * count;
  }
  return static_cast<double>(total);
}

}  // namespace

TEST_CASE("large-multiplicity split") {
  EmConfig cfg;
  const double tau = large_multiplicity_threshold(10000, 1.5);
  CHECK(tau == doctest::Approx(1.5 * std::pow(std::log(1e4), 2)));
  CHECK(tau == doctest::Approx(127.2).epsilon(1e-3));

  // n = 10^4: one symbol at 200, one at 100, the rest singletons.
  std::map<std::uint64_t, std::uint64_t> counts{{0, 200}, {1, 100}};
  for (std::uint64_t s = 2; s < 2 + 9700; ++s) counts[s] = 1;
  const Sample sample(counts);
  REQUIRE(sample.n() == 10000);
  const auto split = split_large(sample, cfg);
  CHECK(split.large_symbols.size() == 1);
  CHECK(split.large_symbols.at(0) == doctest::Approx(0.02));
  CHECK(split.removed_mass == doctest::Approx(0.02));
  CHECK(split.reduced_sample.counts().contains(1));
  CHECK(split.reduced_sample.n() + 200 == sample.n());

  std::map<std::uint64_t, std::uint64_t> singles;
  for (std::uint64_t s = 0; s < 50; ++s) singles[s] = 1;
  const auto none = split_large(Sample(singles), cfg);
  CHECK(none.large_symbols.empty());
  CHECK(none.removed_mass == 0.0);

  const auto all = split_large(Sample(std::map<std::uint64_t, std::uint64_t>{{7, 500}}), cfg);
  CHECK(all.removed_mass == doctest::Approx(1.0));
  CHECK(all.reduced_sample.empty());
}

TEST_CASE("support estimator") {
  std::map<std::uint64_t, std::uint64_t> singles;
  for (std::uint64_t s = 0; s < 1000; ++s) singles[s] = 1;
  const auto phi = profile_of(Sample(singles));
  CHECK(support_estimator_raw(phi) == doctest::Approx(support_formula(phi)).epsilon(1e-10));

  Rng rng(RngSeed{31});
  for (int rep = 0; rep < 50; ++rep) {
    std::map<std::uint64_t, std::uint64_t> c;
    const std::size_t d = 1 + rng.below(200);
    for (std::uint64_t s = 0; s < d; ++s) c[s] = 1 + rng.below(1 + rng.below(20));
    const auto prof = profile_of(Sample(c));
    if (prof.n() < 3) continue;
    CHECK(support_estimator_raw(prof) == doctest::Approx(support_formula(prof)).epsilon(1e-9));
    const auto est = estimate_support(prof, 10000);
    CHECK(est >= prof.distinct());
    CHECK(est <= std::max<std::uint64_t>(prof.distinct(), 10000));
  }
  CHECK(estimate_support(P({{1, 2}})) == 2);  // n < 3 falls back to distinct
  CHECK(estimate_support(phi, 1200) <= 1200);
}

TEST_CASE("support estimator sanity band on uniform k=5000, n=1e4") {
  std::vector<double> est;
  for (std::uint64_t seed = 0; seed < 30; ++seed)
    est.push_back(static_cast<double>(estimate_support(draw_sample(make_uniform(5000), 10000, RngSeed{seed}))));
  std::nth_element(est.begin(), est.begin() + 15, est.end());
  MESSAGE("median support estimate: " << est[15]);
  CHECK(est[15] >= 2500);
  CHECK(est[15] <= 10000);
}

TEST_CASE("em_pml converges on the two-draw profiles") {
  const auto spread = em_pml(P({{1, 2}}), 2, exact_cfg(200));
  CHECK(spread[0] == doctest::Approx(0.5).epsilon(1e-3));
  CHECK(spread[1] == doctest::Approx(0.5).epsilon(1e-3));

  const auto point = em_pml(P({{2, 1}}), 2, exact_cfg(200));
  CHECK(std::abs(point[0] - 1.0) < 1e-3);
  CHECK(point[1] < 1e-3);
}

TEST_CASE("zero iterations return the initialization") {
  const auto phi = P({{1, 3}, {2, 2}, {5, 1}});
  EmConfig cfg = exact_cfg(0);
  auto init = em_initialization(phi, 9);
  std::sort(init.begin(), init.end(), std::greater<>());
  const auto out = em_pml(phi, 9, cfg);
  for (std::size_t i = 0; i < init.size(); ++i) CHECK(out[i] == doctest::Approx(init[i]).epsilon(1e-15));
  cfg.estep = EStepMode::kMcmc;
  const auto mc = em_pml(phi, 9, cfg);
  for (std::size_t i = 0; i < init.size(); ++i) CHECK(mc[i] == doctest::Approx(init[i]).epsilon(1e-15));
}

TEST_CASE("em_pml rejects infeasible support") {
  CHECK_THROWS_AS(em_pml(P({{1, 3}}), 2, exact_cfg()), InvalidArgument);
}

TEST_CASE("exact E-step EM is monotone in the profile likelihood") {
  for (std::uint64_t n = 1; n <= 6; ++n) {
    for (const auto& phi : enumerate_profiles(n)) {
      for (std::size_t K = phi.distinct(); K <= 8; ++K) {
        const auto trace = em_pml_traced(phi, K, exact_cfg(15));
        REQUIRE(trace.exact);
        REQUIRE(trace.log_likelihood.size() == 16);
        for (std::size_t t = 1; t < trace.log_likelihood.size(); ++t) {
          const double prev = std::exp(trace.log_likelihood[t - 1]);
          const double cur = std::exp(trace.log_likelihood[t]);
          CHECK(cur >= prev - 1e-12);
        }
      }
    }
  }
}

TEST_CASE("exact E-step EM is a 0.9-approximate PML on small instances") {
  for (std::uint64_t n = 1; n <= 6; ++n) {
    for (const auto& phi : enumerate_profiles(n)) {
      for (std::size_t k = std::max<std::size_t>(1, phi.distinct()); k <= 3; ++k) {
        const auto oracle = exact_pml_oracle(phi, k, 24);
        const double em = profile_probability(em_pml(phi, k, exact_cfg()), phi);
        CHECK(em >= 0.9 * oracle.probability);
      }
    }
  }
}

TEST_CASE("MCMC E-step tracks the exact E-step") {
  const auto phi = P({{1, 4}, {2, 2}, {3, 1}});
  EmConfig cfg = exact_cfg(20);
  const auto exact = em_pml(phi, 9, cfg);
  cfg.estep = EStepMode::kMcmc;
  cfg.mcmc_sweeps_per_estep = 400;
  const auto mcmc = em_pml(phi, 9, cfg);
  CHECK(sorted_l1(exact, mcmc) < 0.1);
  const double le = log_profile_probability(exact, phi), lm = log_profile_probability(mcmc, phi);
  CHECK(lm >= le - 0.1);
}

TEST_CASE("approximate_pml pipeline contracts") {
  EmConfig cfg;
  const auto one = approximate_pml(Sample(std::map<std::uint64_t, std::uint64_t>{{3, 40}}), 1, cfg);
  REQUIRE(one.size() == 1);
  CHECK(one[0] == 1.0);

  // One heavy symbol (mu = 600 of n = 2000) next to a long tail.
  std::map<std::uint64_t, std::uint64_t> counts{{0, 600}};
  for (std::uint64_t s = 1; s <= 700; ++s) counts[s] = 1 + (s % 3);
  const Sample sample(counts);
  const auto split = split_large(sample, cfg);
  REQUIRE(split.large_symbols.size() == 1);
  const auto out = approximate_pml(sample, std::nullopt, cfg);
  CHECK(compensated_sum(out.probs()) == doctest::Approx(1.0).epsilon(1e-12));
  for (double p : out.probs()) CHECK(p >= 0.0);
  const double heavy = 600.0 / static_cast<double>(sample.n());
  const bool found = std::any_of(out.probs().begin(), out.probs().end(),
                                 [&](double p) { return std::abs(p / heavy - 1.0) < 1e-9; });
  CHECK(found);

  const auto with_k = approximate_pml(sample, 1000, cfg);
  CHECK(with_k.size() == 1000);
  CHECK_THROWS_AS(approximate_pml(sample, 100, cfg), InvalidArgument);
  CHECK_THROWS_AS(approximate_pml(Sample(std::map<std::uint64_t, std::uint64_t>{{0, 1}}), std::nullopt, cfg), InvalidArgument);
}

TEST_CASE("approximate_pml is deterministic for a fixed seed") {
  const auto s = draw_sample(make_zipf(300), 3000, RngSeed{4});
  EmConfig cfg;
  cfg.seed = RngSeed{99};
  const auto a = approximate_pml(s, std::nullopt, cfg), b = approximate_pml(s, std::nullopt, cfg);
  CHECK(std::vector<double>(a.probs().begin(), a.probs().end()) ==
        std::vector<double>(b.probs().begin(), b.probs().end()));
}

TEST_CASE("approximate_pml beats the empirical distribution on uniform k=100, n=1e4") {
  const auto truth = make_uniform(100);
  int wins = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto s = draw_sample(truth, 10000, RngSeed{seed});
    EmConfig cfg;
    cfg.seed = derive_seed(RngSeed{seed}, 1);
    const double pml = sorted_l1(approximate_pml(s, std::nullopt, cfg), truth);
    const double emp = sorted_l1(empirical_distribution(s), truth);
    wins += pml <= emp;
  }
  CHECK(wins >= 7);
}

TEST_CASE("sample_from_profile carries the multiplicities") {
  const auto phi = P({{1, 2}, {4, 1}});
  const auto s = sample_from_profile(phi);
  CHECK(profile_of(s) == phi);
  CHECK(s.counts().begin()->second == 4);
}
