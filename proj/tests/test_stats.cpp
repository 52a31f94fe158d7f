#include <gtest/gtest.h>

#include <cmath>

#include "galoiscache/errors.hpp"
#include "galoiscache/stats.hpp"

namespace galoiscache {
namespace {

TEST(WilsonInterval, KnownValues) {
  const auto ci = wilson_interval(50, 100);
  EXPECT_NEAR(ci.low, 0.4038, 1e-4);
  EXPECT_NEAR(ci.high, 0.5962, 1e-4);
  const auto zero = wilson_interval(0, 10);
  EXPECT_EQ(zero.low, 0.0);
  EXPECT_NEAR(zero.high, 0.2775, 1e-4);
  const auto none = wilson_interval(0, 0);
  EXPECT_EQ(none.low, 0.0);
  EXPECT_EQ(none.high, 1.0);
}

TEST(BinomialSd, Examples) {
  EXPECT_NEAR(binomial_sd(0.25, 100000), std::sqrt(0.25 * 0.75 / 100000), 1e-15);
  EXPECT_EQ(binomial_sd(0.5, 0), 0.0);
}

TEST(ChiSquare, OneDegreeOfFreedom) {
  const auto r = chi_square_independence({{10, 20}, {30, 40}});
  const double x = 4.0 / 12 + 4.0 / 18 + 4.0 / 28 + 4.0 / 42;
  EXPECT_NEAR(r.statistic, x, 1e-12);
  EXPECT_EQ(r.dof, 1u);
  // Survival function of chi-square(1) is erfc(sqrt(x / 2)).
  EXPECT_NEAR(r.p_value, std::erfc(std::sqrt(x / 2)), 1e-12);
}

TEST(ChiSquare, TwoDegreesOfFreedom) {
  const auto r = chi_square_independence({{5, 10, 15}, {20, 10, 5}});
  EXPECT_EQ(r.dof, 2u);
  // Survival function of chi-square(2) is exp(-x / 2).
  EXPECT_NEAR(r.p_value, std::exp(-r.statistic / 2), 1e-12);
  EXPECT_LT(r.p_value, 0.01);
}

TEST(ChiSquare, DropsEmptyColumnsAndRows) {
  const auto r = chi_square_independence({{10, 0, 20}, {30, 0, 40}, {0, 0, 0}});
  EXPECT_EQ(r.dof, 1u);
  EXPECT_NEAR(r.statistic, chi_square_independence({{10, 20}, {30, 40}}).statistic, 1e-12);
}

TEST(ChiSquare, IdenticalRowsGiveNoEvidence) {
  const auto r = chi_square_independence({{100, 50, 25}, {100, 50, 25}});
  EXPECT_EQ(r.statistic, 0.0);
  EXPECT_NEAR(r.p_value, 1.0, 1e-12);
}

TEST(ChiSquare, RejectsMalformedTables) {
  EXPECT_THROW(chi_square_independence({}), DomainError);
  EXPECT_THROW(chi_square_independence({{1, 2}, {3}}), DomainError);
}

}  // namespace
}  // namespace galoiscache
