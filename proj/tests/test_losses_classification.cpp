#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "llk/error.hpp"
#include "llk/losses_classification.hpp"
#include "llk/numerics.hpp"

using namespace llk;

namespace {
const double kLn2 = std::log(2.0);
}

TEST(Bce, Examples) {
  EXPECT_NEAR(bce(1.0, 0.5), kLn2, 1e-15);
  EXPECT_NEAR(bce(1.0, 0.25), std::log(4.0), 1e-15);
  EXPECT_NEAR(bce(0.0, 1e-12), 0.0, 1e-11);
  EXPECT_TRUE(std::isfinite(bce(1.0, 0.0)));
}

TEST(Bce, FromLogits) {
  EXPECT_NEAR(bce_from_logits(1.0, 0.0), kLn2, 1e-15);
  EXPECT_NEAR(bce_from_logits(0.0, -1000.0), 0.0, 1e-300);
  EXPECT_NEAR(bce_from_logits(1.0, 1000.0), 0.0, 1e-300);
  for (double z : {-12.0, -3.0, 0.4, 5.0, 12.0})
    for (double y : {0.0, 1.0}) EXPECT_NEAR(bce_from_logits(y, z), bce(y, logistic(z)), 1e-10);
  EXPECT_NEAR(bce_from_logits_grad(1.0, 0.7), logistic(0.7) - 1.0, 1e-15);
}

TEST(Bce, FromLogitsFullRangeAgainstLongDouble) {
  for (int i = 0; i <= 600; ++i) {
    const long double z = -30.0L + 0.1L * i;
    for (long double y : {0.0L, 1.0L}) {
      long double ref = std::max(z, 0.0L) + std::log1p(std::exp(-std::fabs(z))) - y * z;
      double got = bce_from_logits(static_cast<double>(y), static_cast<double>(z));
      EXPECT_NEAR(got, static_cast<double>(ref), 1e-10 * std::max(1.0, std::fabs(got)))
          << "z=" << static_cast<double>(z);
    }
  }
}

TEST(Bce, Bipolar) {
  EXPECT_NEAR(bipolar_bce(1.0, 1.0 - 1e-12), 0.0, 1e-11);
  EXPECT_NEAR(bipolar_bce(1.0, 0.0), kLn2, 1e-15);
  for (double t : {0.0, 1.0})
    for (double p : {0.1, 0.35, 0.8})
      EXPECT_NEAR(bipolar_bce(2 * t - 1, 2 * p - 1), bce(t, p), 1e-12);
}

TEST(Cce, Examples) {
  std::vector<double> uniform(4, 0.25);
  EXPECT_NEAR(cce({0, 4}, uniform), std::log(4.0), 1e-15);
  std::vector<double> sure{0.0, 1.0, 0.0};
  EXPECT_NEAR(cce({1, 3}, sure), 0.0, 1e-11);
  std::vector<double> p{0.1, 0.2, 0.7};
  EXPECT_NEAR(cce({2, 3}, p), -std::log(0.7), 1e-15);
}

TEST(Cce, Validation) {
  std::vector<double> three{0.2, 0.3, 0.5};
  EXPECT_THROW(cce({0, 2}, three), DomainError);
  std::vector<double> p{0.5, 0.5};
  EXPECT_THROW(cce({2, 2}, p), DomainError);
}

TEST(Cce, FromLogits) {
  std::vector<double> z0{0.0, 0.0};
  EXPECT_NEAR(cce_from_logits({0, 2}, z0), kLn2, 1e-15);
  std::vector<double> z1{1000.0, 0.0};
  EXPECT_NEAR(cce_from_logits({0, 2}, z1), 0.0, 1e-300);

  std::vector<double> z{1.0, 2.0, 3.0};
  auto g = cce_from_logits_grad({1, 3}, z);
  for (std::size_t c = 0; c < 3; ++c) {
    double fd = central_difference(
        [&](double t) {
          auto zz = z;
          zz[c] = t;
          return cce_from_logits({1, 3}, zz);
        },
        z[c]);
    EXPECT_NEAR(g[c], fd, 1e-8);
  }
}

TEST(Focal, Examples) {
  std::vector<double> p{0.2, 0.5, 0.3};
  EXPECT_NEAR(focal({1, 3}, p, 0.0), cce({1, 3}, p), 1e-15);
  EXPECT_NEAR(focal({1, 3}, p, 2.0), 0.25 * kLn2, 1e-15);
  // easy examples lose weight faster than hard ones
  std::vector<double> easy{0.05, 0.9, 0.05};
  EXPECT_LT(focal({1, 3}, easy, 2.0) / cce({1, 3}, easy), focal({1, 3}, p, 2.0) / cce({1, 3}, p));
}

TEST(Hinge, Examples) {
  EXPECT_DOUBLE_EQ(hinge(HingeKind::kBinary, 1.0, 2.0), 0.0);
  EXPECT_DOUBLE_EQ(hinge(HingeKind::kBinary, 1.0, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(hinge(HingeKind::kSquared, -1.0, 0.5), 2.25);
  std::vector<double> s{3.0, 0.0, 0.0};
  EXPECT_DOUBLE_EQ(hinge(HingeKind::kWestonWatkins, OneHot{0, 3}, s), 0.0);
  std::vector<double> s2{0.0, 0.5, 0.2};
  EXPECT_DOUBLE_EQ(hinge(HingeKind::kCrammerSinger, OneHot{0, 3}, s2), 1.5);
  EXPECT_DOUBLE_EQ(hinge(HingeKind::kWestonWatkins, OneHot{0, 3}, s2), 2.7);
}

TEST(Hinge, NamesRoundTrip) {
  for (HingeKind k : {HingeKind::kBinary, HingeKind::kSquared, HingeKind::kCrammerSinger,
                      HingeKind::kWestonWatkins})
    EXPECT_EQ(parse_hinge(hinge_name(k)), k);
}

TEST(Classification, GradientsMatchFiniteDifferences) {
  for (double p : {0.05, 0.3, 0.6, 0.97}) {
    for (double y : {0.0, 1.0}) {
      double fd = central_difference([&](double t) { return bce(y, t); }, p);
      EXPECT_NEAR(bce_grad(y, p), fd, 1e-6 + 1e-4 * std::abs(fd));
    }
  }
  std::vector<double> q{0.15, 0.25, 0.6};
  for (double gamma : {0.0, 1.0, 2.0}) {
    auto g = focal_grad({2, 3}, q, gamma);
    double fd = central_difference(
        [&](double t) {
          auto qq = q;
          qq[2] = t;
          return focal({2, 3}, qq, gamma);
        },
        q[2]);
    EXPECT_NEAR(g[2], fd, 1e-6 + 1e-4 * std::abs(fd));
  }
}
