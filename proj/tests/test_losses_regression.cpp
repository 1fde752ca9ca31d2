#include <gtest/gtest.h>

#include <cmath>

#include "llk/error.hpp"
#include "llk/losses_regression.hpp"
#include "llk/numerics.hpp"

using namespace llk;

namespace {
RegLossSpec of(RegLossKind k) { return RegLossSpec::of(k); }
}  // namespace

TEST(RegressionLoss, Examples) {
  EXPECT_DOUBLE_EQ(reg_loss(of(RegLossKind::kMse), 1.0, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(reg_loss(of(RegLossKind::kHuber), 2.0, 0.0), 1.5);
  EXPECT_DOUBLE_EQ(reg_loss(of(RegLossKind::kHuber), 0.5, 0.0), 0.125);
  EXPECT_NEAR(reg_loss(of(RegLossKind::kTukey), 5.0, 0.0), 1.0 / 6.0, 1e-15);
  EXPECT_NEAR(reg_loss(of(RegLossKind::kGammaDeviance), 3.0, 3.0), 0.0, 1e-15);
  EXPECT_DOUBLE_EQ(reg_loss(of(RegLossKind::kLogPareto), 1.7, 1.7), 0.0);
  EXPECT_DOUBLE_EQ(reg_loss(of(RegLossKind::kMae), -2.0, 1.0), 3.0);
}

TEST(RegressionLoss, PinballHalfIsHalfMae) {
  auto pb = of(RegLossKind::kPinball);
  pb.tau = 0.5;
  EXPECT_DOUBLE_EQ(reg_loss(pb, 2.0, 0.0), 1.0);
  for (double r : {-3.0, -0.4, 0.0, 1.1, 8.0})
    EXPECT_NEAR(reg_loss(pb, r, 0.0), 0.5 * reg_loss(of(RegLossKind::kMae), r, 0.0), 1e-15);
}

TEST(RegressionLoss, GradientExamples) {
  EXPECT_DOUBLE_EQ(reg_loss_grad(of(RegLossKind::kMse), 1.0, 0.0), -2.0);
  EXPECT_DOUBLE_EQ(reg_loss_grad(of(RegLossKind::kCauchy), 0.4, 0.4), 0.0);
  EXPECT_DOUBLE_EQ(reg_loss_grad(of(RegLossKind::kMae), 1.0, 1.0), 0.0);
  EXPECT_NEAR(reg_loss_grad(of(RegLossKind::kLogPareto), 0.0, 3.0), 0.25, 1e-15);
}

TEST(RegressionLoss, TukeyIsFlatBeyondC) {
  auto t = of(RegLossKind::kTukey);
  EXPECT_DOUBLE_EQ(reg_loss_grad(t, 10.0, 0.0), 0.0);
  EXPECT_DOUBLE_EQ(reg_loss(t, 10.0, 0.0), reg_loss(t, 50.0, 0.0));
}

TEST(RegressionLoss, GradientsMatchFiniteDifferences) {
  FdConfig cfg;
  for (RegLossKind k : all_reg_loss_kinds()) {
    auto s = of(k);
    auto kinks = reg_loss_kinks(s);
    for (int i = 0; i < 60; ++i) {
      double y, yhat;
      if (reg_loss_needs_positive(k)) {
        y = 0.2 + 0.07 * i;
        yhat = 0.3 + 0.05 * ((i * 7) % 60);
      } else {
        y = 0.5;
        yhat = -3.05 + 0.1 * i;
      }
      bool skip = false;
      for (double c : kinks) skip |= std::abs((y - yhat) - c) < 1e-3;
      if (skip) continue;
      double fd = central_difference([&](double t) { return reg_loss(s, y, t); }, yhat, cfg);
      EXPECT_TRUE(cfg.accepts(reg_loss_grad(s, y, yhat), fd))
          << reg_loss_name(k) << " y=" << y << " yhat=" << yhat;
    }
  }
}

TEST(RegressionLoss, DomainErrors) {
  EXPECT_THROW(reg_loss(of(RegLossKind::kGammaDeviance), 1.0, -1.0), DomainError);
  EXPECT_THROW(reg_loss(of(RegLossKind::kPoisson), -1.0, 1.0), DomainError);
  auto pb = of(RegLossKind::kPinball);
  pb.tau = 1.5;
  EXPECT_THROW(pb.validate(), DomainError);
}

TEST(RegressionLoss, PoissonForms) {
  // the mean-scale NLL and its doubled form; neither vanishes at yhat = y
  double y = 2.0, yhat = 2.0;
  double nll = reg_loss(of(RegLossKind::kPoisson), y, yhat);
  EXPECT_NEAR(nll, yhat - y * std::log(yhat), 1e-15);
  EXPECT_NEAR(reg_loss(of(RegLossKind::kPoissonDeviancePaper), y, yhat), 2.0 * nll, 1e-15);
  EXPECT_NE(nll, 0.0);
  // the full Tweedie deviance does vanish there
  EXPECT_NEAR(reg_loss(of(RegLossKind::kTweedieFull), y, yhat), 0.0, 1e-14);
}

TEST(RegressionLoss, LogScalePredict) {
  EXPECT_DOUBLE_EQ(log_scale_predict(0.0, 0.0), 1.0);
  EXPECT_NEAR(log_scale_predict(std::log(2.0), 0.0), 2.0, 1e-15);
  EXPECT_NEAR(log_scale_predict(0.0, 2.0), std::exp(1.0), 1e-15);
}

TEST(RegressionLoss, NamesRoundTrip) {
  EXPECT_EQ(all_reg_loss_kinds().size(), 18u);
  for (RegLossKind k : all_reg_loss_kinds()) EXPECT_EQ(parse_reg_loss(reg_loss_name(k)), k);
  EXPECT_FALSE(is_reg_loss_name("msee"));
}
