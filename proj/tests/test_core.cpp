#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "pmllab/core.hpp"

using namespace pmllab;

namespace {

Distribution D(std::vector<double> v) { return Distribution(std::move(v)); }

}  // namespace

TEST_CASE("distribution validates and renormalizes within tolerance") {
  CHECK(D({0.25, 0.75})[1] == 0.75);
  const auto near = D({0.5, 0.5 + 5e-10});
  CHECK(near[0] + near[1] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(D({0.5, 0.6}), InvalidArgument);
  CHECK_THROWS_AS(D({-0.1, 1.1}), InvalidArgument);
  CHECK_THROWS_AS(D({}), InvalidArgument);
  CHECK(Distribution::from_weights(std::vector<double>{1, 3})[1] == doctest::Approx(0.75));
  CHECK_THROWS_AS(Distribution::from_weights(std::vector<double>{0, 0}), InvalidArgument);
}

TEST_CASE("resized pads with zeros or keeps the largest entries") {
  const auto d = D({0.1, 0.6, 0.3});
  const auto padded = d.resized(5);
  REQUIRE(padded.size() == 5);
  CHECK(padded[3] == 0.0);
  const auto cut = d.resized(2);
  REQUIRE(cut.size() == 2);
  CHECK(cut[0] + cut[1] == doctest::Approx(1.0));
  CHECK(cut[0] == doctest::Approx(0.6 / 0.9));
}

TEST_CASE("profile_of: alfalfa and friends") {
  // a:3, l:2, f:2
  const std::vector<std::uint64_t> alfalfa = {'a', 'l', 'f', 'a', 'l', 'f', 'a'};
  const auto phi = profile_of(Sample::from_sequence(alfalfa));
  CHECK(phi.dense() == std::vector<std::uint64_t>{0, 2, 1});
  CHECK(phi.n() == 7);

  const auto single = profile_of(Sample(std::map<std::uint64_t, std::uint64_t>{{42, 5}}));
  CHECK(single.prevalence(5) == 1);
  CHECK(single.distinct() == 1);
  for (std::uint64_t i = 1; i < 5; ++i) CHECK(single.prevalence(i) == 0);

  const auto mixed = profile_of(Sample(std::map<std::uint64_t, std::uint64_t>{{0, 1}, {1, 1}, {2, 2}}));
  CHECK(mixed.prevalence(1) == 2);
  CHECK(mixed.prevalence(2) == 1);
  CHECK(mixed.multiplicities() == std::vector<std::uint64_t>{2, 1, 1});
}

TEST_CASE("profile identity sum i*phi_i = n holds on random samples") {
  Rng rng(RngSeed{11});
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t len = 1 + rng.below(300);
    std::vector<std::uint64_t> draws(len);
    for (auto& x : draws) x = rng.below(1 + rng.below(50));
    const auto phi = profile_of(Sample::from_sequence(draws));
    std::uint64_t total = 0;
    for (const auto& [i, c] : phi.prevalences()) total += i * c;
    CHECK(total == len);
  }
}

TEST_CASE("sample rejects zero multiplicities") {
  CHECK_THROWS_AS(Sample(std::map<std::uint64_t, std::uint64_t>{{1, 0}}), InvalidArgument);
}

TEST_CASE("truncate_profile") {
  const auto phi = Profile::from_dense(std::vector<std::uint64_t>{0, 2, 1});
  auto t2 = truncate_profile(phi, 2);
  CHECK(t2.prevalences == std::vector<std::uint64_t>{0, 2});
  CHECK(t2.n == 7);
  CHECK(truncate_profile(phi, 3).prevalences == std::vector<std::uint64_t>{0, 2, 1});
  const auto ones = Profile::from_dense(std::vector<std::uint64_t>{3});
  CHECK(truncate_profile(ones, 5).prevalences == std::vector<std::uint64_t>{3, 0, 0, 0, 0});
  CHECK_THROWS_AS(truncate_profile(phi, 0), InvalidArgument);
}

TEST_CASE("lp_distance") {
  const auto p = D({1, 0}), q = D({0, 1});
  CHECK(lp_distance(p, p, 1) == 0.0);
  CHECK(lp_distance(p, q, 1) == doctest::Approx(2.0));
  CHECK(lp_distance(p, q, 2) == doctest::Approx(std::sqrt(2.0)));
  CHECK_THROWS_AS(lp_distance(p, D({1, 0, 0}), 1), InvalidArgument);
  CHECK_THROWS_AS(lp_distance(p, q, 3), InvalidArgument);
}

TEST_CASE("sorted_l1 examples against permutation brute force") {
  CHECK(sorted_l1(D({0.7, 0.3}), D({0.3, 0.7})) == doctest::Approx(0.0));
  CHECK(sorted_l1(D({0.6, 0.4}), D({0.5, 0.5})) == doctest::Approx(oracle::sorted_l1_by_permutation({0.6, 0.4}, {0.5, 0.5})));
  CHECK(sorted_l1(D({0.6, 0.4}), D({0.5, 0.5})) == doctest::Approx(0.2));
  CHECK(sorted_l1(D({1.0}), D({0.5, 0.5})) == doctest::Approx(1.0));
  CHECK(sorted_l1(D({0.5, 0.5}), D({1.0})) == doctest::Approx(1.0));

  Rng rng(RngSeed{3});
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t kp = 1 + rng.below(6), kq = 1 + rng.below(6);
    const auto p = oracle::random_simplex(rng, kp), q = oracle::random_simplex(rng, kq);
    CHECK(sorted_l1(D(p), D(q)) == doctest::Approx(oracle::sorted_l1_by_permutation(p, q)).epsilon(1e-12));
  }
}

TEST_CASE("sorted_l1 is a pseudometric bounded by the labelled l1") {
  Rng rng(RngSeed{4});
  for (int rep = 0; rep < 300; ++rep) {
    const std::size_t k = 1 + rng.below(12);
    const auto p = D(oracle::random_simplex(rng, k)), q = D(oracle::random_simplex(rng, k)),
               r = D(oracle::random_simplex(rng, k));
    CHECK(sorted_l1(p, q) == doctest::Approx(sorted_l1(q, p)).epsilon(1e-14));
    CHECK(sorted_l1(p, r) <= sorted_l1(p, q) + sorted_l1(q, r) + 1e-9);
    CHECK(sorted_l1(p, q) <= lp_distance(p, q, 1) + 1e-12);
    // Zero on a relabeling of the same multiset.
    std::vector<double> rev(p.probs().rbegin(), p.probs().rend());
    CHECK(sorted_l1(p, D(rev)) == doctest::Approx(0.0).epsilon(1e-14));
  }
}

TEST_CASE("wasserstein1_multiset") {
  const auto p = D({0.6, 0.4}), q = D({0.5, 0.5});
  CHECK(wasserstein1_multiset(p, p) == 0.0);
  CHECK(wasserstein1_multiset(p, q) == doctest::Approx(0.1));
  Rng rng(RngSeed{5});
  const auto a = D(oracle::random_simplex(rng, 5)), b = D(oracle::random_simplex(rng, 5));
  CHECK(wasserstein1_multiset(a, b) == doctest::Approx(sorted_l1(a, b) / 5.0).epsilon(1e-12));
  CHECK_THROWS_AS(wasserstein1_multiset(a, p), InvalidArgument);
}

TEST_CASE("remd_truncated examples") {
  const auto p = D({0.5, 0.5}), q = D({0.25, 0.25, 0.25, 0.25});
  CHECK(remd_truncated(p, p, 1e-3) == 0.0);
  CHECK(remd_truncated(D({1.0}), D({0.5, 0.5}), 1.0) == doctest::Approx(0.0));
  CHECK(remd_truncated(p, q, 1e-6) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("remd_truncated is non-increasing in tau and symmetric") {
  Rng rng(RngSeed{6});
  for (int rep = 0; rep < 100; ++rep) {
    const auto p = D(oracle::random_simplex(rng, 1 + rng.below(10)));
    const auto q = D(oracle::random_simplex(rng, 1 + rng.below(10)));
    double prev = INFINITY;
    for (double tau : {1e-8, 1e-4, 1e-2, 0.05, 0.1, 0.3, 1.0}) {
      const double v = remd_truncated(p, q, tau);
      CHECK(v >= 0.0);
      CHECK(v <= prev + 1e-12);
      CHECK(v == doctest::Approx(remd_truncated(q, p, tau)).epsilon(1e-10));
      prev = v;
    }
  }
}

TEST_CASE("remd_truncated matches a brute-force transport on two-point instances") {
  // Two masses on each side: the transport plan has one free parameter, so a
  // fine scan over it is an independent optimum.
  Rng rng(RngSeed{7});
  for (int rep = 0; rep < 40; ++rep) {
    const double a = 0.05 + 0.9 * rng.uniform(), b = 0.05 + 0.9 * rng.uniform();
    const std::vector<double> p = {a, 1 - a}, q = {b, 1 - b};
    const double tau = 1e-3;
    auto cost = [&](double x, double y) { return std::abs(std::log(std::max(x, tau) / std::max(y, tau))); };
    double best = INFINITY;
    const int steps = 20000;
    for (int s = 0; s <= steps; ++s) {
      const double t = std::min(p[0], q[0]) * s / steps;  // mass p0 -> q0
      const double f01 = p[0] - t, f10 = q[0] - t, f11 = p[1] - f10;
      if (f01 < -1e-15 || f10 < -1e-15 || f11 < -1e-15) continue;
      best = std::min(best, t * cost(p[0], q[0]) + f01 * cost(p[0], q[1]) + f10 * cost(p[1], q[0]) +
                                f11 * cost(p[1], q[1]));
    }
    CHECK(remd_truncated(D(p), D(q), tau) <= best + 1e-9);
    CHECK(remd_truncated(D(p), D(q), tau) >= best - 1e-3);
  }
}

TEST_CASE("compensated_sum keeps small terms") {
  std::vector<double> v(1, 1.0);
  v.insert(v.end(), 1000000, 1e-16);
  CHECK(compensated_sum(v) == doctest::Approx(1.0 + 1e-10).epsilon(1e-15));
}
