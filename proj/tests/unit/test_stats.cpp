#include "activesub/errors.hpp"
#include "activesub/stats.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

using namespace activesub;

TEST(ClopperPearson, ZeroSuccessesClosedForm) {
  // Upper limit solves (1-p)^n = alpha/2.
  const BinomialInterval ci = clopper_pearson(0, 1000);
  EXPECT_EQ(ci.lower, 0.0);
  EXPECT_NEAR(ci.upper, 1.0 - std::pow(0.025, 1.0 / 1000), 1e-12);
}

TEST(ClopperPearson, AllSuccessesClosedForm) {
  const BinomialInterval ci = clopper_pearson(50, 50);
  EXPECT_EQ(ci.upper, 1.0);
  EXPECT_NEAR(ci.lower, std::pow(0.025, 1.0 / 50), 1e-12);
}

TEST(ClopperPearson, KnownValue) {
  // 10 of 100: reference (0.0490047, 0.1762226).
  const BinomialInterval ci = clopper_pearson(10, 100);
  EXPECT_NEAR(ci.lower, 0.04900469, 1e-7);
  EXPECT_NEAR(ci.upper, 0.17622260, 1e-7);
}

TEST(ClopperPearson, DoublingTrialsShrinksWidth) {
  const BinomialInterval a = clopper_pearson(5, 500);
  const BinomialInterval b = clopper_pearson(10, 1000);
  EXPECT_LT(b.upper - b.lower, a.upper - a.lower);
}

TEST(ClopperPearson, RejectsBadInput) {
  EXPECT_THROW(clopper_pearson(0, 0), ArgumentError);
  EXPECT_THROW(clopper_pearson(3, 2), ArgumentError);
}

TEST(EmpiricalQuantile, InverseCdf) {
  const std::vector<double> x{5, 1, 4, 2, 3};
  EXPECT_EQ(empirical_quantile(x, 0.5), 3.0);
  EXPECT_EQ(empirical_quantile(x, 0.9), 5.0);
  EXPECT_EQ(empirical_quantile(x, 0.2), 1.0);
  EXPECT_EQ(empirical_quantile(x, 0.0), 1.0);
}

TEST(FittedSlope, ExactLine) {
  const std::vector<double> x{0, 1, 2, 3};
  const std::vector<double> y{1, -1, -3, -5};
  EXPECT_DOUBLE_EQ(fitted_slope(x, y), -2.0);
}
