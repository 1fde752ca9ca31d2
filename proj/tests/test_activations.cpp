#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "llk/activations.hpp"
#include "llk/error.hpp"
#include "llk/numerics.hpp"

using namespace llk;

namespace {
ActivationSpec spec(ActivationKind k) { return ActivationSpec::defaults(k); }
}  // namespace

TEST(Activations, ScalarExamples) {
  EXPECT_DOUBLE_EQ(act_value(spec(ActivationKind::kLogistic), 0.0), 0.5);
  EXPECT_DOUBLE_EQ(act_value(spec(ActivationKind::kRelu), -3.0), 0.0);
  EXPECT_DOUBLE_EQ(act_value(spec(ActivationKind::kRelu), 2.5), 2.5);

  auto sw = spec(ActivationKind::kSwish);
  sw.beta = 0.0;
  EXPECT_NEAR(act_value(sw, 4.0), 2.0, 1e-15);

  auto sq = spec(ActivationKind::kSquareplus);
  sq.b = 0.0;
  EXPECT_DOUBLE_EQ(act_value(sq, -2.0), 0.0);
  EXPECT_DOUBLE_EQ(act_value(sq, 3.0), 3.0);
}

TEST(Activations, DerivativeExamples) {
  EXPECT_DOUBLE_EQ(act_deriv(spec(ActivationKind::kLogistic), 0.0), 0.25);
  EXPECT_DOUBLE_EQ(act_deriv(spec(ActivationKind::kTanh), 0.0), 1.0);
  for (double z : {-5.0, -0.3, 0.0, 1.7, 9.0})
    EXPECT_NEAR(act_deriv(spec(ActivationKind::kSoftplus), z), logistic(z), 1e-15);
}

TEST(Activations, HeavisideDerivativeUnsupported) {
  EXPECT_THROW(act_deriv(spec(ActivationKind::kHeaviside), 1.0), UnsupportedError);
  EXPECT_DOUBLE_EQ(act_value(spec(ActivationKind::kHeaviside), 1.0), 1.0);
  EXPECT_DOUBLE_EQ(act_value(spec(ActivationKind::kHeaviside), -1.0), 0.0);
}

TEST(Activations, DerivativesMatchFiniteDifferences) {
  FdConfig cfg;
  for (ActivationKind k : differentiable_activation_kinds()) {
    auto s = spec(k);
    auto kinks = activation_kinks(s);
    for (double z = -4.05; z <= 4.0; z += 0.1) {
      bool near_kink = false;
      for (double c : kinks) near_kink |= std::abs(z - c) < 1e-3;
      if (near_kink) continue;
      double fd = central_difference([&](double t) { return act_value(s, t); }, z, cfg);
      EXPECT_TRUE(cfg.accepts(act_deriv(s, z), fd))
          << activation_name(k) << " at " << z << ": " << act_deriv(s, z) << " vs " << fd;
    }
  }
}

TEST(Activations, DifferentiableSetExcludesHeavisideAndCrelu) {
  auto kinds = differentiable_activation_kinds();
  EXPECT_EQ(kinds.size(), 16u);
  for (ActivationKind k : kinds) {
    EXPECT_NE(k, ActivationKind::kHeaviside);
    EXPECT_NE(k, ActivationKind::kCrelu);
  }
}

TEST(Activations, NamesRoundTrip) {
  for (ActivationKind k : all_activation_kinds())
    EXPECT_EQ(parse_activation(activation_name(k)), k);
  EXPECT_THROW(parse_activation("sigmoidd"), DomainError);
}

TEST(Activations, ParameterValidation) {
  auto sq = spec(ActivationKind::kSquareplus);
  sq.b = -1.0;
  EXPECT_THROW(sq.validate(), DomainError);
}

TEST(Activations, Crelu) {
  auto v = crelu(-2.0);
  EXPECT_DOUBLE_EQ(v[0], 0.0);
  EXPECT_DOUBLE_EQ(v[1], 2.0);
  auto d = crelu_deriv(3.0);
  EXPECT_DOUBLE_EQ(d[0], 1.0);
  EXPECT_DOUBLE_EQ(d[1], 0.0);
}

TEST(Softmax, Examples) {
  auto a = softmax(std::vector<double>{0, 0, 0});
  for (double v : a) EXPECT_NEAR(v, 1.0 / 3.0, 1e-15);

  auto b = softmax(std::vector<double>{0, std::log(3.0)});
  EXPECT_NEAR(b[0], 0.25, 1e-15);
  EXPECT_NEAR(b[1], 0.75, 1e-15);

  auto big = softmax(std::vector<double>{1001, 1002});
  auto small = softmax(std::vector<double>{1, 2});
  EXPECT_NEAR(big[0], small[0], 1e-15);
  EXPECT_NEAR(big[1], small[1], 1e-15);
}

TEST(Softmax, JacobianExamples) {
  auto j = softmax_jacobian(std::vector<double>{0, 0});
  EXPECT_NEAR(j[0], 0.25, 1e-15);
  EXPECT_NEAR(j[1], -0.25, 1e-15);
  EXPECT_NEAR(j[2], -0.25, 1e-15);
  EXPECT_NEAR(j[3], 0.25, 1e-15);

  std::vector<double> x{0.3, -1.2, 2.0};
  auto jac = softmax_jacobian(x);
  for (std::size_t i = 0; i < 3; ++i) {
    double row = 0.0;
    for (std::size_t c = 0; c < 3; ++c) row += jac[i * 3 + c];
    EXPECT_NEAR(row, 0.0, 1e-15);
  }
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t c = 0; c < 3; ++c) {
      double fd = central_difference(
          [&](double t) {
            auto xs = x;
            xs[c] = t;
            return softmax(xs)[i];
          },
          x[c]);
      EXPECT_NEAR(jac[i * 3 + c], fd, 1e-8);
    }
  }
}
