#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "entbound/sq_bounds.hpp"
#include "oracles.hpp"

using namespace entbound;

namespace {

const double kHalf = 1.0 / std::sqrt(2.0);

double h2(double x) { return oracle::log2_term(x) + oracle::log2_term(1.0 - x); }

SuperpositionSpec example2(std::size_t n, std::size_t d) {
  const FamilyParams p{n, d, 0.0};
  return SuperpositionSpec({kHalf, -kHalf},
                           {make_state(Family::example2_psi1, p), make_state(Family::example2_psi2, p)});
}

// Entropy of the ex2 components' single-party spectrum {1/10, 9/(10(d-1)) x (d-1)}.
double example2_party_entropy(std::size_t d) {
  return oracle::log2_term(0.1) +
         static_cast<double>(d - 1) * oracle::log2_term(0.9 / static_cast<double>(d - 1));
}

SuperpositionSpec random_pair(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto p1 = random_state({2, 2, 2}, rng());
  const auto p2 = random_state({2, 2, 2}, rng());
  const double th = u(rng) * 1.5707963;
  return SuperpositionSpec(
      {std::polar(std::cos(th), 6.28 * u(rng)), std::polar(std::sin(th), 6.28 * u(rng))},
      {p1, p2});
}

}  // namespace

TEST(BinaryEntropy, Values) {
  EXPECT_EQ(binary_entropy(0.5), 1.0);
  EXPECT_EQ(binary_entropy(0.0), 0.0);
  EXPECT_EQ(binary_entropy(1.0), 0.0);
  EXPECT_NEAR(binary_entropy(0.1), -0.1 * std::log2(0.1) - 0.9 * std::log2(0.9), 1e-16);
  EXPECT_NEAR(binary_entropy(0.1), 0.4690, 5e-5);
  EXPECT_THROW(binary_entropy(-0.1), invalid_argument);
  EXPECT_THROW(binary_entropy(1.5), invalid_argument);
}

TEST(BinaryEntropy, SymmetricWhenComplementIsExact) {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 1000; ++t) {
    const double x = std::ldexp(static_cast<double>((rng() >> 11) | 1u), -53);
    EXPECT_LE(std::abs(binary_entropy(x) - binary_entropy(1.0 - x)), 1e-15);
  }
}

TEST(Thm3Upper, SingleComponentIsTwiceItsEntropy) {
  const auto p1 = random_state({2, 2, 2}, 1);
  const auto p2 = random_state({2, 2, 2}, 2);
  EXPECT_NEAR(thm3_upper(SuperpositionSpec({1.0, 0.0}, {p1, p2}), 1.7, 0.4, 3), 3.4, 1e-15);
}

TEST(Thm3Upper, ExampleTwo) {
  for (std::size_t n : {2u, 3u, 8u}) {
    const auto spec = example2(n, 11);
    const double s = example2_party_entropy(11);
    EXPECT_NEAR(s, 3.4587, 5e-5);
    const double expected = 2.0 / 1.8 * (n * s + n * 1.0);
    const double esq = static_cast<double>(n) * s;
    const double up = thm3_upper(spec, esq, esq, n);
    EXPECT_NEAR(up, expected, 1e-12);
    EXPECT_NEAR(up / n, 4.954, 5e-4);
    EXPECT_GE(up, n * std::log2(10.0));
  }
}

TEST(Thm3Upper, GhzPlusW) {
  const auto ghz = make_state(Family::ghz);
  const auto w = make_state(Family::w);
  const SuperpositionSpec spec({kHalf, kHalf}, {ghz, w});
  const double s_w = entropy_profile(w).total;
  // W: every qubit has spectrum {2/3, 1/3}
  EXPECT_NEAR(s_w, 3.0 * h2(1.0 / 3.0), 1e-13);
  const double up = thm3_upper(spec, 3.0, s_w, 3);
  EXPECT_NEAR(up, 2.0 * ((3.0 + s_w) / 2.0 + 3.0), 1e-13);
  EXPECT_LE(entropy_profile(superpose(spec).state).total, up);
}

TEST(Thm4Upper, SymmetricCaseEqualsThm3) {
  const auto p1 = random_state({2, 2, 2}, 7);
  const auto p2 = random_state({2, 2, 2}, 8);
  const SuperpositionSpec spec({kHalf, kHalf}, {p1, p2});
  const auto r = thm4_upper(spec, 1.3, 1.3, 3);
  ASSERT_TRUE(r.has_value());
  EXPECT_NEAR(r->t_star, 0.5, 1e-9);
  EXPECT_NEAR(r->value, thm3_upper(spec, 1.3, 1.3, 3), 1e-12);
  EXPECT_NEAR(r->f_min, 2.0 * (1.3 + 3.0), 1e-12);
}

TEST(Thm4Upper, NotApplicableForSingleComponent) {
  const auto p1 = random_state({2, 2}, 7);
  const auto p2 = random_state({2, 2}, 8);
  EXPECT_FALSE(thm4_upper(SuperpositionSpec({1.0, 0.0}, {p1, p2}), 0.5, 0.5, 2).has_value());
  EXPECT_FALSE(thm4_upper(SuperpositionSpec({0.0, 1.0}, {p1, p2}), 0.5, 0.5, 2).has_value());
}

TEST(Thm4Upper, ExampleTwoNoWorseThanThm3) {
  const auto spec = example2(3, 11);
  const double esq = 3.0 * example2_party_entropy(11);
  const auto r = thm4_upper(spec, esq, esq, 3);
  ASSERT_TRUE(r.has_value());
  EXPECT_LE(r->value, thm3_upper(spec, esq, esq, 3) + 1e-9);
}

TEST(Thm4Upper, GhzPlusWAboveExactValue) {
  const SuperpositionSpec spec({kHalf, kHalf}, {make_state(Family::ghz), make_state(Family::w)});
  const auto r = thm4_upper(spec, 3.0, entropy_profile(make_state(Family::w)).total, 3);
  ASSERT_TRUE(r.has_value());
  EXPECT_GE(r->value, entropy_profile(superpose(spec).state).total - 1e-8);
}

// Brute-force oracle: evaluate f(t) directly on a 200001-point grid.
TEST(Thm4Upper, MatchesDenseGridAndIsStationary) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  for (int t = 0; t < 40; ++t) {
    const auto spec = random_pair(rng);
    const double e1 = u(rng), e2 = u(rng);
    const double wa = std::norm(spec.coefficients()[0]);
    const double wb = std::norm(spec.coefficients()[1]);
    auto f = [&](double x) {
      return (x * wb + (1 - x) * wa) / (x * (1 - x)) * (x * e1 + (1 - x) * e2 + 3.0 * h2(x));
    };
    const auto r = thm4_upper(spec, e1, e2, 3);
    ASSERT_TRUE(r.has_value());
    const auto [gx, gmin] = oracle::grid_min(f, 1e-6, 1 - 1e-6, 200001);
    EXPECT_LE(r->f_min, gmin * (1.0 + 1e-12));
    EXPECT_GE(r->f_min, gmin - 1e-6 * std::max(1.0, gmin));
    EXPECT_NEAR(r->value * spec.superposition_norm_sq(), r->f_min, 1e-12 * r->f_min);
    if (r->interior) {
      EXPECT_LE(r->residual, 1e-5);
      const double slope = oracle::central_difference(f, r->t_star, 1e-7 * r->t_star);
      EXPECT_LE(std::abs(slope), 1e-4 * std::max(1.0, gmin / r->t_star));
    }
  }
}

TEST(Thm5Lower, ProductComponentsGiveZero) {
  const auto p1 = PureState::sparse_from_labels({2, 2}, {{{0, 0}, 1.0}});
  const auto p2 = PureState::sparse_from_labels({2, 2}, {{{1, 1}, 1.0}});
  const auto r = thm5_lower(SuperpositionSpec({kHalf, kHalf}, {p1, p2}), 0.0, 0.0, 2);
  EXPECT_EQ(r.value, 0.0);
  EXPECT_LE(r.c_max, 0.0);
  EXPECT_LE(r.d_max, 0.0);
}

TEST(Thm5Lower, RequiresNormalizedSuperposition) {
  const auto p = random_state({2, 2}, 3);
  const auto q = random_state({2, 2}, 4);
  // unit weights, but a psi1 + b psi2 has norm != 1 for non-orthogonal components
  EXPECT_THROW(thm5_lower(SuperpositionSpec({kHalf, kHalf}, {p, q}), 0.5, 0.5, 2), not_normalized);
}

TEST(Thm5Lower, ExampleThreeDegenerateDirection) {
  const FamilyParams p{3, 16, 0.1};
  const auto psi1 = make_state(Family::example3_psi1, p);
  const auto psi2 = make_state(Family::example3_psi2, p);
  const double esq2 = entropy_profile(psi2).total;
  const double expected =
      3.0 * (oracle::log2_term(0.9) + 16.0 * oracle::log2_term(0.1 / 16.0));
  EXPECT_NEAR(esq2, expected, 1e-12);
  EXPECT_NEAR(expected, 2.607, 5e-4);
  const SuperpositionSpec spec({0.0, 1.0}, {psi1, psi2},
                               CoefficientConvention::unit_superposition);
  EXPECT_LE(thm5_lower(spec, 0.0, esq2, 3).value, esq2 + 1e-8);
}

TEST(Thm5Lower, OrthogonalRandomPairs) {
  std::mt19937_64 rng(55);
  for (int t = 0; t < 30; ++t) {
    const auto p1 = random_state({2, 2, 2}, rng());
    // Gram-Schmidt a second random state against p1
    const auto r = random_state({2, 2, 2}, rng());
    const cplx ov = inner_product(p1, r);
    std::vector<cplx> v(8);
    for (int i = 0; i < 8; ++i) v[i] = r.dense_amplitudes()[i] - ov * p1.dense_amplitudes()[i];
    normalize_in_place(v);
    const auto p2 = PureState::dense({2, 2, 2}, v);
    const SuperpositionSpec spec({kHalf, kHalf}, {p1, p2}, CoefficientConvention::unit_superposition);
    const double exact = entropy_profile(superpose(spec).state).total;
    const auto b = thm5_lower(spec, entropy_profile(p1).total, entropy_profile(p2).total, 3);
    EXPECT_LE(b.value, exact + 1e-8);
  }
}

// Brute-force oracle for the C-branch maximum.
TEST(Thm5Lower, MatchesDenseGrid) {
  const auto p1 = PureState::sparse_from_labels({2, 2}, {{{0, 0}, 1.0}});
  const auto p2 = PureState::sparse_from_labels({2, 2}, {{{1, 1}, 1.0}});
  const double wa = 0.2, wb = 0.8;
  const SuperpositionSpec spec({std::sqrt(wa), std::sqrt(wb)}, {p1, p2});
  const double e1 = 0.01, e2 = 5.0;
  auto c = [&](double t) {
    return (1 - t) * wb / (1 - t * (1 - wa)) * e2 - (1 - t) / t * e1 - 2.0 / t * h2(t);
  };
  const auto [gx, gmin] = oracle::grid_min([&](double t) { return -c(t); }, 1e-6, 1 - 1e-6, 200001);
  const auto r = thm5_lower(spec, e1, e2, 2);
  EXPECT_NEAR(r.c_max, -gmin, 1e-9);
  EXPECT_GE(r.c_max, -gmin - 1e-12);
}

TEST(Example3Report, SpectrumDefinitions) {
  const auto r = example3_report(0.1, 16);
  EXPECT_EQ(r.fidelity, 1.0 - 0.1);
  EXPECT_EQ(r.esq1, 0.0);
  const double expected = 3.0 * (oracle::log2_term(0.9) + 16.0 * oracle::log2_term(0.1 / 16.0));
  EXPECT_NEAR(r.esq2, expected, 1e-12);
  EXPECT_NEAR(r.esq2_approx, 1.2, 1e-15);

  const auto zero = example3_report(0.0, 16);
  EXPECT_EQ(zero.fidelity, 1.0);
  EXPECT_EQ(zero.esq2, 0.0);

  EXPECT_THROW(example3_report(1.0, 16), invalid_argument);
  EXPECT_THROW(example3_report(0.1, 1), invalid_argument);
}

TEST(Example3Report, AgreesWithStateAndGrowsWithD) {
  const auto fromstate = entropy_profile(make_state(Family::example3_psi2, {3, 8, 0.01})).total;
  EXPECT_NEAR(example3_report(0.01, 8).esq2, fromstate, 1e-12);
  const auto psi1 = make_state(Family::example3_psi1, {3, 8, 0.01});
  const auto psi2 = make_state(Family::example3_psi2, {3, 8, 0.01});
  EXPECT_NEAR(std::norm(inner_product(psi1, psi2)), 0.99, 1e-15);

  double prev = 0.0;
  for (std::size_t d : {2u, 4u, 16u, 64u, 256u, 1024u}) {
    const auto r = example3_report(0.01, d);
    EXPECT_NEAR(r.fidelity, 0.99, 1e-15);
    EXPECT_GT(r.esq2, prev);
    prev = r.esq2;
  }
}

TEST(SquashedBoundReport, ExactnessAnchors) {
  for (std::size_t n : {2u, 3u, 5u}) {
    EXPECT_NEAR(entropy_profile(make_state(Family::ghz, {n, 2, 0})).total, static_cast<double>(n),
                1e-10);
    for (std::size_t d : {3u, 5u, 11u}) {
      const auto r = squashed_bound_report(example2(n, d));
      EXPECT_NEAR(r.e_sq_gamma, n * std::log2(static_cast<double>(d - 1)), 1e-10);
      EXPECT_LE(r.e_sq_gamma, r.upper_thm3);
    }
  }
}

TEST(SquashedBoundReport, RandomInstancesRespectAllBounds) {
  std::mt19937_64 rng(77);
  for (int t = 0; t < 100; ++t) {
    const auto spec = random_pair(rng);
    const auto r = squashed_bound_report(spec);
    EXPECT_LE(r.e_sq_gamma, r.upper_thm3 + 1e-8);
    ASSERT_TRUE(r.thm4.has_value());
    EXPECT_LE(r.e_sq_gamma, r.thm4->value + 1e-8);
    EXPECT_LE(r.thm4->value, r.upper_thm3 + 1e-9);
    EXPECT_LE(r.thm5.value, r.e_sq_gamma + 1e-8);
    if (r.thm4->interior) EXPECT_LE(r.thm4->residual, 1e-5);
  }
}
