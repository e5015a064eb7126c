#include "smallcal/coverage_law.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "oracles.hpp"
#include "smallcal/errors.hpp"

namespace smallcal {
namespace {

TEST(CoverageCdf, UniformLaw) {
  EXPECT_NEAR(coverage_cdf(CoverageLaw(1, 1), 0.5), 0.5, 1e-14);
  EXPECT_NEAR(coverage_ppf(CoverageLaw(1, 1), 0.3), 0.3, 1e-12);
}

TEST(CoverageCdf, ClassicPredictorAtHundredPoints) {
  // The N=100, C_nom=0.9 conformal predictor uses m = 91.
  const CoverageLaw law(91, 100);
  const double below_nominal = coverage_cdf(law, 0.9);
  const double below_086 = coverage_cdf(law, 0.86);
  EXPECT_NEAR(below_nominal, 0.46, 0.02);
  EXPECT_NEAR(below_086, 0.10, 0.02);
  EXPECT_NEAR(below_nominal, oracle::beta_cdf(0.9, 91, 10), 1e-12);
  EXPECT_NEAR(below_086, oracle::beta_cdf(0.86, 91, 10), 1e-12);
}

TEST(CoverageCdf, RejectsOutOfRange) {
  const CoverageLaw law(3, 10);
  EXPECT_THROW(coverage_cdf(law, 1.5), DomainError);
  EXPECT_THROW(CoverageLaw(0, 10), DomainError);
  EXPECT_THROW(CoverageLaw(11, 10), DomainError);
  EXPECT_THROW(CoverageLaw(1, 0), DomainError);
}

TEST(CoveragePpf, MatchesBisectionAndRoundTrips) {
  const CoverageLaw law(91, 100);
  const double ppf = coverage_ppf(law, 0.05);
  const double oracle = oracle::bisect([&](double c) { return coverage_cdf(law, c); }, 0.05, 0.0, 1.0);
  EXPECT_NEAR(ppf, oracle, 1e-9);
  EXPECT_LT(ppf, 0.86);

  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(1e-6, 1.0 - 1e-6);
  for (int i = 0; i < 200; ++i) {
    const double p = u(rng);
    EXPECT_NEAR(coverage_cdf(law, coverage_ppf(law, p)), p, 1e-9);
  }
}

TEST(CoverageSurvival, ComplementsCdf) {
  const CoverageLaw law(37.5, 60);
  for (double c : {0.1, 0.4, 0.6, 0.9}) {
    EXPECT_NEAR(coverage_cdf(law, c) + coverage_survival(law, c), 1.0, 1e-14);
  }
}

TEST(ExpectedCoverage, BetaMean) {
  EXPECT_DOUBLE_EQ(expected_coverage(CoverageLaw(91, 100)), 91.0 / 101.0);
  EXPECT_DOUBLE_EQ(expected_coverage(CoverageLaw(1, 1)), 0.5);
}

TEST(ExpectedCoverage, MatchesUniformOrderStatisticMonteCarlo) {
  const std::int64_t n = 30;
  const std::int64_t m = 27;  // ceil(30 * 0.9)
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int reps = 40000;
  double sum = 0.0, sum2 = 0.0;
  std::vector<double> draws(n);
  for (int r = 0; r < reps; ++r) {
    for (auto& d : draws) d = u(rng);
    std::nth_element(draws.begin(), draws.begin() + (m - 1), draws.end());
    const double v = draws[m - 1];
    sum += v;
    sum2 += v * v;
  }
  const double mean = sum / reps;
  const double se = std::sqrt((sum2 / reps - mean * mean) / reps);
  EXPECT_NEAR(mean, expected_coverage(CoverageLaw(m, n)), 3.0 * se);
}

TEST(CoverageCdf, StrictlyDecreasingInOrderIndex) {
  const std::int64_t n = 200;
  for (double c : {0.3, 0.7, 0.9, 0.97}) {
    double prev = 2.0;
    for (double m = 0.5; m <= n; m += 0.5) {
      const double v = coverage_cdf(CoverageLaw(m, n), c);
      if (prev > 1e-300) {
        ASSERT_LE(v, prev) << c << " " << m;
      }
      prev = v;
    }
  }
}

TEST(MarginalGap, SimpleCases) {
  EXPECT_EQ(marginal_gap_simple_exact(10, 0.5), Rational(-1, 22));
  EXPECT_EQ(marginal_gap_simple_exact(100, 0.9), Rational(90, 101) - Rational(9, 10));
  EXPECT_EQ(marginal_gap_simple_exact(100, 0.905), Rational(91, 101) - Rational(181, 200));
  EXPECT_NEAR(marginal_gap_simple(100, 0.905), expected_coverage(CoverageLaw(91, 100)) - 0.905, 1e-15);
}

TEST(MarginalGap, ClassicCases) {
  EXPECT_EQ(marginal_gap_classic_exact(10, 0.5), Rational(1, 22));
  EXPECT_EQ(marginal_gap_classic_exact(9, 0.5), Rational(0, 1));
  EXPECT_EQ(marginal_gap_classic_exact(100, 0.9), Rational(91, 101) - Rational(9, 10));
  EXPECT_NEAR(marginal_gap_classic(100, 0.9), 0.000990099, 1e-9);
  EXPECT_THROW(marginal_gap_classic(10, 0.99), InfeasibleError);
}

TEST(MarginalGap, ClassicIndexAgreesWithExactCeiling) {
  for (std::int64_t n = 1; n <= 300; ++n) {
    for (int k = 1; k <= 99; ++k) {
      const double c = k / 100.0;
      const std::int64_t exact = (Rational(n + 1, 1) * Rational(k, 100)).ceil();
      ASSERT_EQ(classic_order_index(n, c), exact) << n << " " << c;
    }
  }
}

TEST(Rational, Basics) {
  EXPECT_EQ(rationalize(0.9), Rational(9, 10));
  EXPECT_EQ(rationalize(0.905), Rational(181, 200));
  EXPECT_EQ(rationalize(1.0 / 3.0), Rational(1, 3));
  EXPECT_EQ(Rational(6, -4), Rational(-3, 2));
  EXPECT_EQ(Rational(11, 2).ceil(), 6);
  EXPECT_EQ(Rational(-11, 2).ceil(), -5);
  EXPECT_LT(Rational(1, 3), Rational(1, 2));
  EXPECT_EQ(guarded_ceil(101 * 0.9), 91);
  EXPECT_EQ(guarded_ceil(10 * 0.9), 9);
}

}  // namespace
}  // namespace smallcal
