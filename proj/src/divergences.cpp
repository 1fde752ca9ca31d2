#include "llk/divergences.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "llk/error.hpp"

namespace llk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_pair(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) {
    throw DomainError("distribution length mismatch: " + std::to_string(p.size()) +
                      " vs " + std::to_string(q.size()));
  }
  validate_distribution(p);
  validate_distribution(q);
}

double kl_unchecked(std::span<const double> p, std::span<const double> q) {
  double total = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (p[k] == 0.0) continue;
    if (q[k] == 0.0) return kInf;
    total += p[k] * std::log(p[k] / q[k]);
  }
  // Rounding can leave a tiny negative residue for p == q.
  return std::max(total, 0.0);
}

}  // namespace

std::string_view divergence_name(DivergenceKind kind) {
  switch (kind) {
    case DivergenceKind::kKl:
      return "kl";
    case DivergenceKind::kCrossEntropy:
      return "cross_entropy";
    case DivergenceKind::kHellinger:
      return "hellinger";
    case DivergenceKind::kTotalVariation:
      return "total_variation";
    case DivergenceKind::kJensenShannon:
      return "jensen_shannon";
    case DivergenceKind::kBhattacharyya:
      return "bhattacharyya";
  }
  throw DomainError("unknown divergence kind");
}

DivergenceKind parse_divergence(std::string_view name) {
  for (auto k : {DivergenceKind::kKl, DivergenceKind::kCrossEntropy,
                 DivergenceKind::kHellinger, DivergenceKind::kTotalVariation,
                 DivergenceKind::kJensenShannon, DivergenceKind::kBhattacharyya}) {
    if (divergence_name(k) == name) return k;
  }
  throw DomainError("unknown divergence '" + std::string(name) + "'");
}

void validate_distribution(std::span<const double> p) {
  if (p.empty()) throw DomainError("distribution must be non-empty");
  double sum = 0.0;
  for (double v : p) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw DomainError("distribution entries must be finite and >= 0");
    }
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw DomainError("distribution must sum to 1");
}

double entropy(std::span<const double> p) {
  validate_distribution(p);
  double h = 0.0;
  for (double v : p) {
    if (v > 0.0) h -= v * std::log(v);
  }
  return h;
}

double bhattacharyya_coefficient(std::span<const double> p, std::span<const double> q) {
  check_pair(p, q);
  double bc = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) bc += std::sqrt(p[k] * q[k]);
  return std::min(bc, 1.0);
}

double divergence(DivergenceKind kind, std::span<const double> p,
                  std::span<const double> q) {
  check_pair(p, q);
  const std::size_t n = p.size();
  switch (kind) {
    case DivergenceKind::kKl:
      return kl_unchecked(p, q);
    case DivergenceKind::kCrossEntropy: {
      double h = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        if (p[k] == 0.0) continue;
        if (q[k] == 0.0) return kInf;
        h -= p[k] * std::log(q[k]);
      }
      return h;
    }
    case DivergenceKind::kHellinger: {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        const double d = std::sqrt(p[k]) - std::sqrt(q[k]);
        s += d * d;
      }
      return std::sqrt(s) / std::numbers::sqrt2;
    }
    case DivergenceKind::kTotalVariation: {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += std::abs(p[k] - q[k]);
      return 0.5 * s;
    }
    case DivergenceKind::kJensenShannon: {
      double js = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        const double m = 0.5 * (p[k] + q[k]);
        if (p[k] > 0.0) js += 0.5 * p[k] * std::log(p[k] / m);
        if (q[k] > 0.0) js += 0.5 * q[k] * std::log(q[k] / m);
      }
      return std::clamp(js, 0.0, std::numbers::ln2);
    }
    case DivergenceKind::kBhattacharyya: {
      const double bc = bhattacharyya_coefficient(p, q);
      if (bc == 0.0) return kInf;
      return std::max(-std::log(bc), 0.0);
    }
  }
  throw DomainError("unknown divergence kind");
}

double renyi(double alpha, std::span<const double> p, std::span<const double> q) {
  check_pair(p, q);
  if (!(alpha >= 0.0)) throw DomainError("renyi: alpha must be >= 0");
  const std::size_t n = p.size();
  if (alpha == 0.0) {
    double support = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      if (p[k] > 0.0) support += q[k];
    }
    if (support == 0.0) return kInf;
    return std::max(-std::log(std::min(support, 1.0)), 0.0);
  }
  if (alpha == 1.0) return kl_unchecked(p, q);
  if (std::isinf(alpha)) {
    double ratio = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      if (p[k] == 0.0) continue;
      if (q[k] == 0.0) return kInf;
      ratio = std::max(ratio, p[k] / q[k]);
    }
    return std::max(std::log(ratio), 0.0);
  }
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    if (p[k] == 0.0) continue;
    if (q[k] == 0.0) {
      if (alpha > 1.0) return kInf;
      continue;
    }
    s += std::pow(p[k], alpha) * std::pow(q[k], 1.0 - alpha);
  }
  if (s == 0.0) return kInf;
  return std::max(std::log(s) / (alpha - 1.0), 0.0);
}

double wasserstein(double order, std::span<const double> p, std::span<const double> q) {
  check_pair(p, q);
  if (!(order >= 1.0)) throw DomainError("wasserstein: order must be >= 1");
  double delta = 0.0;
  double total = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    delta += p[k] - q[k];
    total += std::pow(std::abs(delta), order);
  }
  return std::pow(total, 1.0 / order);
}

}  // namespace llk
