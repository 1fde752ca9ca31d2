#pragma once

#include <span>
#include <string_view>

namespace llk {

enum class DivergenceKind {
  kKl,
  kCrossEntropy,
  kHellinger,
  kTotalVariation,
  kJensenShannon,
  kBhattacharyya,
};

std::string_view divergence_name(DivergenceKind kind);
DivergenceKind parse_divergence(std::string_view name);

/// Checks nonnegative entries summing to 1 within 1e-9.
void validate_distribution(std::span<const double> p);

/// Natural-log entropy with 0 log 0 = 0.
double entropy(std::span<const double> p);

/// D(p || q) between finite discrete distributions of equal length.
///
/// Conventions: 0 log 0 = 0 and 0 log(0/0) = 0. KL and cross-entropy return
/// +infinity when q_k = 0 < p_k. Total variation is half the L1 distance.
/// Hellinger carries the 1/sqrt(2) factor so it lies in [0, 1].
double divergence(DivergenceKind kind, std::span<const double> p,
                  std::span<const double> q);

/// Bhattacharyya coefficient sum_k sqrt(p_k q_k).
double bhattacharyya_coefficient(std::span<const double> p, std::span<const double> q);

/// Renyi divergence of order alpha >= 0 (alpha may be +infinity). Orders 0, 1
/// and infinity use their limiting closed forms; alpha = 1 is KL.
double renyi(double alpha, std::span<const double> p, std::span<const double> q);

/// Cumulative-difference Wasserstein distance for distributions on unit-spaced
/// ordered categories: delta_0 = 0, delta_{k+1} = delta_k + p_k - q_k,
/// W_order = (sum_k |delta_k|^order)^(1/order).
double wasserstein(double order, std::span<const double> p, std::span<const double> q);

}  // namespace llk
