#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "llk/divergences.hpp"
#include "llk/error.hpp"

using namespace llk;

namespace {
using V = std::vector<double>;
const double kLn2 = std::log(2.0);
}  // namespace

TEST(Divergence, KlExamples) {
  V p{0.2, 0.3, 0.5};
  EXPECT_DOUBLE_EQ(divergence(DivergenceKind::kKl, p, p), 0.0);
  EXPECT_NEAR(divergence(DivergenceKind::kKl, V{1, 0}, V{0.5, 0.5}), kLn2, 1e-15);
  EXPECT_EQ(divergence(DivergenceKind::kKl, V{0.5, 0.5}, V{1, 0}),
            std::numeric_limits<double>::infinity());
}

TEST(Divergence, DisjointSupports) {
  V p{1, 0}, q{0, 1};
  EXPECT_NEAR(divergence(DivergenceKind::kHellinger, p, q), 1.0, 1e-15);
  EXPECT_NEAR(divergence(DivergenceKind::kTotalVariation, p, q), 1.0, 1e-15);
  EXPECT_NEAR(divergence(DivergenceKind::kJensenShannon, p, q), kLn2, 1e-15);
}

TEST(Divergence, Bhattacharyya) {
  V p{0.1, 0.9};
  EXPECT_NEAR(divergence(DivergenceKind::kBhattacharyya, p, p), 0.0, 1e-15);
  EXPECT_NEAR(bhattacharyya_coefficient(p, p), 1.0, 1e-15);
  EXPECT_NEAR(bhattacharyya_coefficient(V{1, 0}, V{0, 1}), 0.0, 1e-15);
}

TEST(Divergence, CrossEntropyDecomposition) {
  V p{0.1, 0.6, 0.3}, q{0.4, 0.4, 0.2};
  EXPECT_NEAR(divergence(DivergenceKind::kCrossEntropy, p, q),
              entropy(p) + divergence(DivergenceKind::kKl, p, q), 1e-12);
}

TEST(Divergence, Renyi) {
  V p{0.2, 0.8}, q{0.5, 0.5};
  EXPECT_NEAR(renyi(1.0, p, q), divergence(DivergenceKind::kKl, p, q), 1e-15);
  EXPECT_NEAR(renyi(0.5, p, q), 2.0 * divergence(DivergenceKind::kBhattacharyya, p, q), 1e-12);
  EXPECT_NEAR(renyi(0.0, p, q), 0.0, 1e-15);
  EXPECT_NEAR(renyi(std::numeric_limits<double>::infinity(), p, q), std::log(1.6), 1e-15);
  double prev = 0.0;
  for (double a : {0.0, 0.25, 0.5, 1.0, 2.0, 5.0}) {
    double d = renyi(a, p, q);
    EXPECT_GE(d, prev - 1e-12);
    prev = d;
  }
  EXPECT_THROW(renyi(-1.0, p, q), DomainError);
}

TEST(Divergence, Wasserstein) {
  V a{1, 0, 0}, b{0, 0, 1};
  EXPECT_NEAR(wasserstein(1.0, a, b), 2.0, 1e-15);
  EXPECT_NEAR(wasserstein(1.0, b, a), 2.0, 1e-15);
  EXPECT_NEAR(wasserstein(2.0, a, b), std::sqrt(2.0), 1e-15);
}

TEST(Divergence, Validation) {
  EXPECT_THROW(divergence(DivergenceKind::kKl, V{0.5, 0.5}, V{0.2, 0.3, 0.5}), DomainError);
  EXPECT_THROW(divergence(DivergenceKind::kKl, V{0.5, 0.6}, V{0.5, 0.5}), DomainError);
  EXPECT_THROW(divergence(DivergenceKind::kKl, V{-0.1, 1.1}, V{0.5, 0.5}), DomainError);
}

TEST(Divergence, NamesRoundTrip) {
  for (auto k : {DivergenceKind::kKl, DivergenceKind::kCrossEntropy, DivergenceKind::kHellinger,
                 DivergenceKind::kTotalVariation, DivergenceKind::kJensenShannon,
                 DivergenceKind::kBhattacharyya})
    EXPECT_EQ(parse_divergence(divergence_name(k)), k);
}

TEST(Divergence, PinskerAndHellingerSandwich) {
  V p{0.05, 0.15, 0.3, 0.5}, q{0.4, 0.3, 0.2, 0.1};
  double kl = divergence(DivergenceKind::kKl, p, q);
  double tv = divergence(DivergenceKind::kTotalVariation, p, q);
  double h = divergence(DivergenceKind::kHellinger, p, q);
  EXPECT_LE(tv, std::sqrt(kl / 2));
  EXPECT_LE(h * h, tv);
  EXPECT_LE(tv, std::sqrt(2.0) * h);
}
