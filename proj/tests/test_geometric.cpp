#include <gtest/gtest.h>

#include <random>

#include "entbound/geometric.hpp"

using namespace entbound;

TEST(LambdaMaxEstimate, PublishedValues) {
  const auto ghz = lambda_max_estimate(make_state(Family::ghz));
  EXPECT_NEAR(ghz.lambda_max, 0.5, 1e-6);
  EXPECT_NEAR(ghz.e_g, 0.5, 1e-6);
  const auto w = lambda_max_estimate(make_state(Family::w));
  EXPECT_NEAR(w.e_g, 5.0 / 9.0, 1e-6);
  EXPECT_TRUE(ghz.converged);
  EXPECT_TRUE(w.converged);
  EXPECT_EQ(ghz.starts_used, 33);
  EXPECT_FALSE(ghz.exact);
}

TEST(LambdaMaxEstimate, ProductStateHasZeroMeasure) {
  const auto zero = PureState::sparse_from_labels({2, 2, 2}, {{{0, 0, 0}, 1.0}});
  const auto r = lambda_max_estimate(zero);
  EXPECT_NEAR(r.lambda_max, 1.0, 1e-15);
  EXPECT_NEAR(r.e_g, 0.0, 1e-15);

  // a rotated product state too
  std::mt19937_64 rng(1);
  auto rotated = zero.to_dense();
  for (std::size_t k = 0; k < 3; ++k) rotated = apply_local_unitary(rotated, k, random_unitary(2, rng));
  EXPECT_NEAR(lambda_max_estimate(rotated).e_g, 0.0, 1e-9);
}

TEST(LambdaMaxEstimate, RejectsBadInput) {
  const auto unnormalized = PureState::dense({2, 2}, {1, 1, 0, 0}, Normalization::unchecked);
  EXPECT_THROW(lambda_max_estimate(unnormalized), not_normalized);
  GeometricOptions opts;
  opts.starts = 0;
  EXPECT_THROW(lambda_max_estimate(make_state(Family::ghz), opts), invalid_argument);
  opts.starts = 4;
  opts.tol = 0.0;
  EXPECT_THROW(lambda_max_estimate(make_state(Family::ghz), opts), invalid_argument);
}

TEST(LambdaMaxEstimate, OptimizerIsConsistent) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto psi = random_state({2, 3, 2}, seed);
    const auto r = lambda_max_estimate(psi);
    for (const auto& f : r.optimizer.factors) {
      double n = 0.0;
      for (const auto& c : f) n += std::norm(c);
      EXPECT_NEAR(n, 1.0, 1e-12);
    }
    EXPECT_NEAR(std::norm(r.optimizer.overlap(psi)), r.lambda_max, 1e-12);
    EXPECT_EQ(r.e_g, 1.0 - r.lambda_max);
    EXPECT_GE(r.e_g, 0.0);
    EXPECT_LE(r.e_g, 1.0);
  }
}

TEST(LambdaMaxEstimate, SweepsNeverDecrease) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto psi = random_state({2, 2, 2, 3}, seed);
    EXPECT_LE(lambda_max_estimate(psi).worst_step_decrease, 1e-12);
  }
}

TEST(LambdaMaxEstimate, DeterministicPerSeedAndStorage) {
  const auto psi = random_state({3, 3, 2}, 77);
  GeometricOptions opts;
  opts.seed = 5;
  const auto a = lambda_max_estimate(psi, opts);
  const auto b = lambda_max_estimate(psi, opts);
  EXPECT_EQ(a.lambda_max, b.lambda_max);
  EXPECT_EQ(a.optimizer.factors, b.optimizer.factors);
  EXPECT_NEAR(lambda_max_estimate(psi.to_sparse(), opts).lambda_max, a.lambda_max, 1e-12);
}

TEST(LambdaMaxEstimate, InvariantUnderLocalUnitaries) {
  std::mt19937_64 rng(8);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto psi = random_state({2, 2, 3}, seed);
    auto rotated = psi;
    for (std::size_t k = 0; k < 3; ++k)
      rotated = apply_local_unitary(rotated, k, random_unitary(psi.dims()[k], rng));
    EXPECT_NEAR(lambda_max_estimate(psi).lambda_max, lambda_max_estimate(rotated).lambda_max,
                1e-8);
  }
}

TEST(LambdaMaxBipartiteExact, KnownStates) {
  const double h = 1.0 / std::sqrt(2.0);
  const auto bell = lambda_max_bipartite_exact(PureState::dense({2, 2}, {h, 0, 0, h}));
  EXPECT_NEAR(bell.lambda_max, 0.5, 1e-15);
  EXPECT_TRUE(bell.exact);
  EXPECT_NEAR(lambda_max_bipartite_exact(PureState::dense({2, 2}, {1, 0, 0, 0})).lambda_max, 1.0,
              1e-15);
  EXPECT_THROW(lambda_max_bipartite_exact(make_state(Family::ghz)), invalid_argument);
}

TEST(LambdaMaxBipartiteExact, OptimizerAttainsValue) {
  const auto psi = random_state({3, 4}, 2);
  const auto r = lambda_max_bipartite_exact(psi);
  EXPECT_NEAR(std::norm(r.optimizer.overlap(psi)), r.lambda_max, 1e-12);
}

TEST(LambdaMaxBipartiteExact, AgreesWithAlternatingEstimate) {
  std::mt19937_64 rng(2024);
  for (int t = 0; t < 100; ++t) {
    const std::vector<std::size_t> dims{2 + rng() % 3, 2 + rng() % 3};
    const auto psi = random_state(dims, rng());
    EXPECT_NEAR(lambda_max_estimate(psi).lambda_max, lambda_max_bipartite_exact(psi).lambda_max,
                1e-8)
        << dims[0] << "x" << dims[1];
  }
}

TEST(LambdaMaxBruteforce, BoundsAndConventions) {
  const auto zero = PureState::sparse_from_labels({2, 2, 2}, {{{0, 0, 0}, 1.0}});
  const double best = lambda_max_bruteforce(zero, 100000, 3);
  // Haar sampling only gets close: P(overlap >= x) is small per qubit
  EXPECT_GE(best, 0.9);
  EXPECT_LE(best, 1.0);
  EXPECT_EQ(lambda_max_bruteforce(zero, 0, 3), 0.0);
}

TEST(LambdaMaxBruteforce, NeverBeatsOptimizer) {
  const auto ghz = make_state(Family::ghz);
  EXPECT_LE(lambda_max_bruteforce(ghz, 1000000, 7), lambda_max_estimate(ghz).lambda_max + 1e-9);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto psi = random_state({2, 2, 2}, seed);
    EXPECT_LE(lambda_max_bruteforce(psi, 20000, seed), lambda_max_estimate(psi).lambda_max + 1e-9);
  }
}
