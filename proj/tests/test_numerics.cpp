#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "llk/error.hpp"
#include "llk/numerics.hpp"

using namespace llk;

namespace {
const double kLn2 = std::log(2.0);
}

TEST(LogSumExp, TwoZeros) {
  std::vector<double> xs{0.0, 0.0};
  EXPECT_NEAR(log_sum_exp(xs), kLn2, 1e-15);
}

TEST(LogSumExp, LargeValuesDoNotOverflow) {
  std::vector<double> xs{1000.0, 1000.0};
  EXPECT_NEAR(log_sum_exp(xs), 1000.0 + kLn2, 1e-12);
}

TEST(LogSumExp, Singleton) {
  std::vector<double> xs{5.0};
  EXPECT_DOUBLE_EQ(log_sum_exp(xs), 5.0);
}

TEST(LogSumExp, EmptyThrows) {
  std::vector<double> xs;
  EXPECT_THROW(log_sum_exp(xs), DomainError);
}

TEST(LogSumExp, ShiftEquivariant) {
  std::vector<double> xs{-3.0, 0.5, 2.25, 7.0};
  std::vector<double> ys = xs;
  for (double& y : ys) y += 123.0;
  EXPECT_NEAR(log_sum_exp(ys), log_sum_exp(xs) + 123.0, 1e-12);
}

TEST(Softplus, Values) {
  EXPECT_NEAR(stable_softplus(0.0), kLn2, 1e-15);
  double tiny = stable_softplus(-1000.0);
  EXPECT_GE(tiny, 0.0);
  EXPECT_LT(tiny, 1e-300);
  EXPECT_NEAR(stable_softplus(1000.0), 1000.0, 1e-12);
  EXPECT_TRUE(std::isfinite(stable_softplus(1e308)));
}

TEST(Logistic, SymmetricAndBounded) {
  EXPECT_DOUBLE_EQ(logistic(0.0), 0.5);
  for (double z : {-800.0, -30.0, -1.0, 2.0, 40.0, 800.0}) {
    double s = logistic(z);
    EXPECT_GE(s, 0.0);
    EXPECT_LE(s, 1.0);
    EXPECT_NEAR(s + logistic(-z), 1.0, 1e-15);
  }
}

TEST(LogGamma, KnownValues) {
  EXPECT_NEAR(log_gamma(1.0), 0.0, 1e-13);
  EXPECT_NEAR(log_gamma(2.0), 0.0, 1e-13);
  EXPECT_NEAR(log_gamma(5.0), std::log(24.0), 1e-12);
  EXPECT_NEAR(log_gamma(0.5), 0.5 * std::log(M_PI), 1e-12);
  for (double x : {0.1, 0.7, 3.3, 12.5, 150.0}) EXPECT_NEAR(log_gamma(x), std::lgamma(x), 1e-10);
}

TEST(LogGamma, NonPositiveThrows) {
  EXPECT_THROW(log_gamma(0.0), DomainError);
  EXPECT_THROW(log_gamma(-2.5), DomainError);
}

TEST(Xlogy, ZeroConvention) {
  EXPECT_EQ(xlogy(0.0, 0.0), 0.0);
  EXPECT_NEAR(xlogy(2.0, std::exp(1.0)), 2.0, 1e-15);
}

TEST(CentralDifference, Examples) {
  EXPECT_NEAR(central_difference([](double z) { return z * z; }, 3.0), 6.0, 1e-8);
  EXPECT_NEAR(central_difference([](double z) { return z; }, -7.0), 1.0, 1e-9);
  EXPECT_NEAR(central_difference(stable_softplus, 0.0), 0.5, 1e-9);
}

TEST(CentralDifference, NonFiniteThrows) {
  auto f = [](double z) { return z > 0 ? std::numeric_limits<double>::infinity() : 0.0; };
  EXPECT_ANY_THROW(central_difference(f, 0.0));
}

TEST(FdConfig, MixedCriterion) {
  FdConfig cfg;
  EXPECT_TRUE(cfg.accepts(1000.0, 1000.05));
  EXPECT_FALSE(cfg.accepts(1000.0, 1000.5));
  EXPECT_TRUE(cfg.accepts(0.0, 5e-7));
  EXPECT_FALSE(cfg.accepts(0.0, 5e-6));
  FdConfig bad;
  bad.step = 0.0;
  EXPECT_THROW(bad.validate(), DomainError);
}

TEST(Normal, CdfAndPdf) {
  EXPECT_DOUBLE_EQ(normal_cdf(0.0), 0.5);
  EXPECT_NEAR(normal_cdf(1.96), 0.9750021048517795, 1e-14);
  EXPECT_NEAR(normal_pdf(0.0), 1.0 / std::sqrt(2.0 * M_PI), 1e-16);
}
