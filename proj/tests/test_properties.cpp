#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "pmllab/distributions.hpp"
#include "pmllab/likelihood.hpp"
#include "pmllab/properties.hpp"

using namespace pmllab;

namespace {

using Counts = std::map<std::uint64_t, std::uint64_t>;

Profile P(Counts m) { return Profile(std::move(m)); }

double falling(double z, unsigned a) {
  double r = 1;
  for (unsigned i = 0; i < a; ++i) r *= z - i;
  return r;
}

// Largest change of the linear estimator over every pair of sequences in
// [0,k)^n that differ in exactly one position.
double brute_force_sensitivity(const LinearEstimator& est, std::size_t n, std::size_t k) {
  double worst = 0.0;
  oracle::for_each_sequence(k, n, [&](const std::vector<std::size_t>& seq) {
    const double base = linear_apply(est, Profile(oracle::prevalences_of(seq, k)));
    auto other = seq;
    for (std::size_t pos = 0; pos < n; ++pos) {
      for (std::size_t sym = 0; sym < k; ++sym) {
        if (sym == seq[pos]) continue;
        other[pos] = sym;
        worst = std::max(worst, std::abs(linear_apply(est, Profile(oracle::prevalences_of(other, k))) - base));
      }
      other[pos] = seq[pos];
    }
  });
  return worst;
}

}  // namespace

TEST_CASE("property values on known distributions") {
  for (std::size_t k : {2, 7, 100}) {
    const auto u = make_uniform(k);
    CHECK(property_value(u, PropertyTag::kEntropy) == doctest::Approx(std::log(k)).epsilon(1e-12));
    for (double a : {0.0, 0.5, 2.0, 3.0})
      CHECK(property_value(u, PropertyTag::kRenyi, a) == doctest::Approx(std::log(k)).epsilon(1e-12));
    CHECK(property_value(u, PropertyTag::kPowerSum, 2.0) == doctest::Approx(1.0 / k).epsilon(1e-12));
    CHECK(property_value(u, PropertyTag::kSupportSize) == k);
    CHECK(property_value(u, PropertyTag::kDistanceToUniformity) == doctest::Approx(0.0).epsilon(1e-12));
  }
  for (std::size_t k : {2, 10, 500})
    CHECK(property_value(make_two_step(k), PropertyTag::kDistanceToUniformity) == doctest::Approx(0.6).epsilon(1e-12));

  const Distribution d({0.5, 0.5, 0.0});
  CHECK(property_value(d, PropertyTag::kSupportSize) == 2);
  CHECK(property_value(d, PropertyTag::kEntropy) == doctest::Approx(std::log(2.0)));
  CHECK(property_value(d, PropertyTag::kRenyi, 0.5) == doctest::Approx(std::log(2.0)));
  CHECK(property_value(d, PropertyTag::kSupportCoverage, 1.0) == doctest::Approx(1.0));
  CHECK(property_value(d, PropertyTag::kSupportCoverage, 2.0) == doctest::Approx(1.5));

  CHECK_THROWS_AS(property_value(d, PropertyTag::kRenyi, 1.0), InvalidArgument);
  CHECK_THROWS_AS(property_value(d, PropertyTag::kRenyi), InvalidArgument);
  CHECK_THROWS_AS(property_value(d, PropertyTag::kSupportCoverage, 0.5), InvalidArgument);
  CHECK_THROWS_AS(parse_property("kurtosis"), InvalidArgument);
  for (auto tag : {PropertyTag::kEntropy, PropertyTag::kRenyi, PropertyTag::kPowerSum, PropertyTag::kSupportSize,
                   PropertyTag::kSupportCoverage, PropertyTag::kDistanceToUniformity})
    CHECK(parse_property(property_name(tag)) == tag);
}

TEST_CASE("coverage at m = k ln(1/eps) tracks support size on the floored class") {
  // Half the symbols at 2/k: every non-zero entry is >= 1/k.
  const std::size_t k = 200;
  std::vector<double> p(k, 0.0);
  for (std::size_t i = 0; i < k / 2; ++i) p[i] = 2.0 / k;
  const Distribution d(p);
  for (double eps : {0.1, 0.01, 0.001}) {
    const double m = k * std::log(1.0 / eps);
    const double s_norm = property_value(d, PropertyTag::kSupportSize) / k;
    const double c_norm = property_value(d, PropertyTag::kSupportCoverage, m) / m;
    CHECK(std::abs(s_norm - c_norm * std::log(1.0 / eps)) <= eps);
  }
}

TEST_CASE("Renyi approaches Shannon near order one") {
  Rng rng(RngSeed{41});
  for (int rep = 0; rep < 20; ++rep) {
    const Distribution d(oracle::random_simplex(rng, 50));
    CHECK(std::abs(property_value(d, PropertyTag::kRenyi, 1.001) - property_value(d, PropertyTag::kEntropy)) <= 0.01);
  }
}

TEST_CASE("empirical distribution") {
  const Sample s(Counts{{0, 3}, {5, 1}});
  const auto e = empirical_distribution(s);
  CHECK(e.size() == 2);
  CHECK(e[0] == 0.75);
  CHECK(e[1] == 0.25);
  CHECK(empirical_distribution(Sample(Counts{{9, 4}}))[0] == 1.0);
  const auto padded = empirical_distribution(s, 4);
  CHECK(padded.size() == 4);
  CHECK(padded[2] == 0.0);
  CHECK(padded[3] == 0.0);
  CHECK_THROWS_AS(empirical_distribution(s, 1), InvalidArgument);
}

TEST_CASE("plug-in estimators") {
  const Sample two(Counts{{0, 1}, {1, 1}});
  CHECK(plug_in(two, PropertyTag::kEntropy, EstimatorKind::kEmpirical, std::nullopt) == doctest::Approx(std::log(2.0)));
  PlugInOptions opts;
  opts.k_hint = 2;
  opts.em.estep = EStepMode::kExact;
  opts.em.em_iterations = 200;
  CHECK(std::abs(plug_in(two, PropertyTag::kEntropy, EstimatorKind::kPml, std::nullopt, opts) - std::log(2.0)) <= 1e-2);

  const auto s = draw_sample(make_zipf(200), 1000, RngSeed{2});
  CHECK(plug_in(s, PropertyTag::kSupportSize, EstimatorKind::kEmpirical, std::nullopt) == s.distinct());
  CHECK_THROWS_AS(plug_in(s, PropertyTag::kDistanceToUniformity, EstimatorKind::kEmpirical, std::nullopt),
                  InvalidArgument);
  PlugInOptions with_k;
  with_k.k_hint = 200;
  const double d = plug_in(s, PropertyTag::kDistanceToUniformity, EstimatorKind::kPml, std::nullopt, with_k);
  CHECK(d >= 0.0);
  CHECK(d <= 2.0);
  CHECK(parse_estimator("tpml") == EstimatorKind::kTpml);
  CHECK_THROWS_AS(parse_estimator("mle"), InvalidArgument);
}

TEST_CASE("empirical entropy plug-in is consistent at n = 1e6") {
  const auto s = draw_sample(make_uniform(100), 1000000, RngSeed{5});
  CHECK(std::abs(plug_in(s, PropertyTag::kEntropy, EstimatorKind::kEmpirical, std::nullopt) - std::log(100.0)) <= 0.01);
}

TEST_CASE("missing mass estimate") {
  CHECK(missing_mass_estimate(P({{2, 3}})) == 0.0);
  CHECK(missing_mass_estimate(P({{1, 2}, {2, 1}})) == doctest::Approx(0.5));
  CHECK(missing_mass_estimate(P({{1, 10}})) == 1.0);
  // Hand evaluation: phi = (3, 1, 0, 1): j=1: 1 > 1 false -> 2*1 = 2; j=2: 2 > 0 -> 2;
  // j=3: 3 > 1 -> 0; j=4: 4 > 0 -> 4. Denominator 8.
  CHECK(missing_mass_estimate(P({{1, 3}, {2, 1}, {4, 1}})) == doctest::Approx(3.0 / 8.0));
  const Sample s(Counts{{0, 1}, {1, 1}, {2, 2}});
  CHECK(missing_mass_estimate(s) == doctest::Approx(0.5));
}

TEST_CASE("falling-factorial power sum") {
  CHECK(falling_factorial_power_sum(Sample(Counts{{0, 2}, {1, 1}}), 2) == doctest::Approx(1.0 / 3.0));
  CHECK(falling_factorial_power_sum(Sample(Counts{{0, 9}}), 2) == doctest::Approx(1.0));
  CHECK(falling_factorial_power_sum(Sample(Counts{{0, 9}}), 3) == doctest::Approx(1.0));
  CHECK_THROWS_AS(falling_factorial_power_sum(Sample(Counts{{0, 1}}), 2), InvalidArgument);
  CHECK_THROWS_AS(falling_factorial_power_sum(Sample(Counts{{0, 5}}), 1), InvalidArgument);

  // E over X^3 ~ (0.5, 0.5) of the alpha = 2 estimator, by all 8 sequences.
  double expect = 0.0;
  oracle::for_each_sequence(2, 3, [&](const std::vector<std::size_t>& seq) {
    const auto c = oracle::counts_of(seq, 2);
    double num = 0;
    for (auto m : c) num += falling(m, 2);
    expect += 0.125 * num / falling(3, 2);
  });
  CHECK(expect == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("falling-factorial power sum is unbiased (exhaustive)") {
  Rng rng(RngSeed{42});
  for (unsigned alpha : {2u, 3u}) {
    for (std::size_t k = 1; k <= 3; ++k) {
      for (std::size_t n = alpha; n <= 6; ++n) {
        for (int rep = 0; rep < 5; ++rep) {
          const auto p = oracle::random_simplex(rng, k);
          double expectation = 0.0;
          oracle::for_each_sequence(k, n, [&](const std::vector<std::size_t>& seq) {
            expectation += oracle::sequence_probability(seq, p) *
                           falling_factorial_power_sum(Profile(oracle::prevalences_of(seq, k)), alpha);
          });
          double truth = 0.0;
          for (double x : p) truth += std::pow(x, alpha);
          CHECK(expectation == doctest::Approx(truth).epsilon(1e-12));
        }
      }
    }
  }
}

TEST_CASE("linear estimators") {
  const auto phi = P({{1, 2}, {2, 1}});
  CHECK(linear_apply(LinearEstimator{{1, 2}}, phi) == doctest::Approx(4.0));
  CHECK(linear_apply(LinearEstimator{{1, 1, 1, 1}}, phi) == doctest::Approx(3.0));
  for (std::uint64_t n = 1; n <= 8; ++n) {
    std::vector<double> c;
    for (std::uint64_t i = 1; i <= n; ++i) c.push_back(static_cast<double>(i) / n);
    for (const auto& prof : enumerate_profiles(n)) CHECK(linear_apply(LinearEstimator{c}, prof) == doctest::Approx(1.0));
  }
  CHECK_THROWS_AS(linear_apply(LinearEstimator{{1}}, phi), InvalidArgument);

  CHECK(linear_sensitivity_bound(LinearEstimator{{0.7, 0.7, 0.7}}) == doctest::Approx(1.4));
  CHECK(linear_sensitivity_bound(LinearEstimator{{1, 2, 3}}) == doctest::Approx(2.0));
  CHECK(mcdiarmid_tail_bound(0.5, 100, 0.1) == doctest::Approx(2.0 * std::exp(-2.0 * 0.25 / (100 * 0.01))));
}

TEST_CASE("sensitivity bound holds and is attained") {
  Rng rng(RngSeed{43});
  for (int rep = 0; rep < 10; ++rep) {
    LinearEstimator est;
    for (int i = 0; i < 4; ++i) est.coeffs.push_back(2.0 * rng.uniform() - 1.0);
    CHECK(brute_force_sensitivity(est, 4, 3) <= linear_sensitivity_bound(est) + 1e-12);
  }
  // l = (1, 0, ...): moving one draw off a doubled symbol onto a fresh symbol
  // gains two singletons, so the bound 2 is reached.
  for (std::size_t n = 3; n <= 5; ++n) {
    LinearEstimator spike{std::vector<double>(n, 0.0)};
    spike.coeffs[0] = 1.0;
    CHECK(brute_force_sensitivity(spike, n, 3) == doctest::Approx(linear_sensitivity_bound(spike)));
  }
}
