#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "llk/bayes_lab.hpp"
#include "llk/error.hpp"
#include "llk/random.hpp"

using namespace llk;

namespace {

double mean(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double median(std::vector<double> v) {
  std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
  return v[v.size() / 2];
}

}  // namespace

TEST(Random, SplitmixSeedingIsDeterministic) {
  Xoshiro256pp a(7), b(7), c(8);
  for (int i = 0; i < 10; ++i) {
    auto x = a();
    EXPECT_EQ(x, b());
    EXPECT_NE(x, c());
  }
  Xoshiro256pp u(1);
  for (int i = 0; i < 1000; ++i) {
    double v = u.uniform();
    EXPECT_GE(v, 0.0);
    EXPECT_LT(v, 1.0);
    double w = u.uniform_open();
    EXPECT_GT(w, 0.0);
    EXPECT_LT(w, 1.0);
  }
}

TEST(Sample, Deterministic) {
  NoiseSpec s{NoiseDist::kGaussian, {{"mu", 1.0}, {"sigma", 2.0}}};
  EXPECT_EQ(sample(s, 100, 5), sample(s, 100, 5));
  EXPECT_NE(sample(s, 100, 5), sample(s, 100, 6));
}

TEST(Sample, GaussianMean) {
  NoiseSpec s{NoiseDist::kGaussian, {{"mu", 3.0}}};
  auto x = sample(s, 100000, 42);
  EXPECT_NEAR(mean(x), 3.0, 3.0 / std::sqrt(100000.0));
}

TEST(Sample, PoissonMean) {
  NoiseSpec s{NoiseDist::kPoisson, {{"lambda", 4.0}}};
  auto x = sample(s, 100000, 42);
  EXPECT_NEAR(mean(x), 4.0, 3.0 * 2.0 / std::sqrt(100000.0));
  for (double v : x) EXPECT_EQ(v, std::floor(v));
}

TEST(Sample, DoubleParetoMedian) {
  NoiseSpec s{NoiseDist::kDoublePareto, {{"alpha", 2.0}}};
  auto x = sample(s, 1000000, 42);
  EXPECT_NEAR(median(x), 0.0, 0.01);
  for (double v : x) ASSERT_TRUE(std::isfinite(v));
}

TEST(Sample, TweedieHasExactZeros) {
  NoiseSpec s{NoiseDist::kTweedie, {{"mu", 2.0}, {"p", 1.5}, {"phi", 1.0}}};
  auto x = sample(s, 10000, 42);
  auto zeros = std::count(x.begin(), x.end(), 0.0);
  // P(N = 0) = exp(-lambda) with lambda = 2^0.5 / 0.5
  double p0 = std::exp(-std::sqrt(2.0) / 0.5);
  EXPECT_NEAR(static_cast<double>(zeros) / 10000.0, p0, 0.01);
  auto c = tweedie_compound(2.0, 1.5, 1.0);
  EXPECT_NEAR(c.lambda * c.shape / c.rate, 2.0, 1e-12);
}

TEST(Sample, InvalidParameters) {
  NoiseSpec s{NoiseDist::kGaussian, {{"sigma", -1.0}}};
  EXPECT_THROW(sample(s, 10, 1), DomainError);
  NoiseSpec t{NoiseDist::kGaussian, {{"lambda", 1.0}}};
  EXPECT_THROW(t.validate(), DomainError);
  EXPECT_THROW(parse_noise("cauchyy"), DomainError);
}

TEST(RiskMinimizer, BruteForce) {
  std::vector<double> s{0.0, 1.0, 2.0, 10.0};
  Grid g{-1.0, 11.0, 0.01};
  EXPECT_NEAR(brute_force_risk_minimizer(RegLossSpec::of(RegLossKind::kMse), s, g), 3.25, 1e-9);
  double med = brute_force_risk_minimizer(RegLossSpec::of(RegLossKind::kMae), s, g);
  EXPECT_GE(med, 1.0 - 1e-9);
  EXPECT_LE(med, 2.0 + 1e-9);

  std::vector<double> u(101);
  for (int i = 0; i <= 100; ++i) u[i] = i;
  auto pb = RegLossSpec::of(RegLossKind::kPinball);
  pb.tau = 0.9;
  EXPECT_NEAR(brute_force_risk_minimizer(pb, u, Grid{0.0, 100.0, 0.5}), 90.0, 0.5);
}

TEST(RiskMinimizer, GridValidation) {
  Grid g{0.0, 1.0, 0.0};
  EXPECT_THROW(g.validate(), DomainError);
  Grid r{1.0, 0.0, 0.1};
  EXPECT_THROW(r.validate(), DomainError);
}

TEST(Recovery, EstimatorKinds) {
  EXPECT_EQ(estimator_for(RegLossSpec::of(RegLossKind::kMse)), EstimatorKind::kMean);
  EXPECT_EQ(estimator_for(RegLossSpec::of(RegLossKind::kMae)), EstimatorKind::kMedian);
  EXPECT_EQ(estimator_for(RegLossSpec::of(RegLossKind::kLogPareto)), EstimatorKind::kMode);
  EXPECT_EQ(estimator_for(RegLossSpec::of(RegLossKind::kPinball)), EstimatorKind::kQuantile);
}

TEST(Recovery, LaplaceMedian) {
  NoiseSpec s{NoiseDist::kLaplace, {{"mu", -1.0}}};
  auto r = estimator_recovery(s, RegLossSpec::of(RegLossKind::kMae), 50000, 3);
  EXPECT_TRUE(r.pass) << r.recovered_value;
  EXPECT_DOUBLE_EQ(r.target_value, -1.0);
}

TEST(Recovery, BceProbability) {
  auto r = bce_probability_recovery(0.3, 100000, 42);
  EXPECT_TRUE(r.pass);
  EXPECT_NEAR(r.recovered_value, 0.3, 0.01);
}

TEST(Recovery, CceRiskMinimizerIsTruth) {
  std::vector<double> q{0.1, 0.2, 0.3, 0.4};
  auto p = cce_risk_minimizer(q, 20);
  ASSERT_EQ(p.size(), 4u);
  for (std::size_t k = 0; k < 4; ++k) EXPECT_NEAR(p[k], q[k], 1e-12);
}

TEST(Robustness, CleanDataDoesNotMove) {
  RegLossSpec ls[] = {RegLossSpec::of(RegLossKind::kMse), RegLossSpec::of(RegLossKind::kMae)};
  auto rows = outlier_robustness_sweep(ls, 0.0, 500, 42);
  for (const auto& r : rows) EXPECT_LE(r.shift, 0.01 + 1e-12);
}

TEST(Robustness, Ordering) {
  RegLossSpec ls[] = {RegLossSpec::of(RegLossKind::kMse), RegLossSpec::of(RegLossKind::kMae),
                      RegLossSpec::of(RegLossKind::kLogPareto)};
  auto rows = outlier_robustness_sweep(ls, 0.1, 1000, 42);
  EXPECT_GT(rows[0].shift, rows[2].shift);
  EXPECT_LE(rows[1].shift, rows[0].shift);
  EXPECT_NEAR(rows[0].shift, 10.0, 0.5);
}

TEST(Synthetic, NoiselessTargetsAreMeans) {
  Matrix w(2, 1);
  w.data = {2.0, -1.0};
  auto d = synthetic_glm_dataset(GlmFamily::of(Family::kGaussian), w, 20, 1, 1.0, true);
  for (std::size_t i = 0; i < d.size(); ++i)
    EXPECT_DOUBLE_EQ(d.targets[i], 2.0 * d.features(i, 0) - 1.0);
}
