#include "llk/losses_classification.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "llk/error.hpp"
#include "llk/numerics.hpp"

namespace llk {

namespace {

double clamp_prob(double p) { return std::clamp(p, kProbClamp, 1.0 - kProbClamp); }

void check_unit_target(double y) {
  if (!(y >= 0.0 && y <= 1.0)) throw DomainError("y must lie in [0, 1]");
}

void check_prob(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("p must lie in [0, 1]");
}

void check_bipolar(double y) {
  if (y != 1.0 && y != -1.0) throw DomainError("bipolar target must be -1 or +1");
}

void check_lengths(const OneHot& target, std::size_t n) {
  target.validate();
  if (target.length != n) {
    throw DomainError("length mismatch: target has " + std::to_string(target.length) +
                      " classes, vector has " + std::to_string(n));
  }
}

// Runner-up score among classes other than the target.
std::size_t runner_up(const OneHot& target, std::span<const double> scores) {
  std::size_t best = target.index == 0 ? 1 : 0;
  for (std::size_t k = 0; k < scores.size(); ++k) {
    if (k != target.index && scores[k] > scores[best]) best = k;
  }
  return best;
}

}  // namespace

void OneHot::validate() const {
  if (length < 2) throw DomainError("one-hot length must be >= 2");
  if (index >= length) throw DomainError("one-hot index out of range");
}

void validate_prob_vector(std::span<const double> probs) {
  if (probs.size() < 2) throw DomainError("probability vector needs >= 2 entries");
  double sum = 0.0;
  for (double p : probs) {
    check_prob(p);
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw DomainError("probabilities must sum to 1");
}

double bce(double y, double p) {
  check_unit_target(y);
  check_prob(p);
  const double q = clamp_prob(p);
  return -(y * std::log(q) + (1.0 - y) * std::log1p(-q));
}

double bce_grad(double y, double p) {
  check_unit_target(y);
  check_prob(p);
  const double q = clamp_prob(p);
  return -y / q + (1.0 - y) / (1.0 - q);
}

double bce_from_logits(double y, double z) {
  check_unit_target(y);
  return stable_softplus(z) - y * z;
}

double bce_from_logits_grad(double y, double z) {
  check_unit_target(y);
  return logistic(z) - y;
}

double bipolar_bce(double y, double yhat) {
  check_bipolar(y);
  if (!(yhat >= -1.0 && yhat <= 1.0)) throw DomainError("yhat must lie in [-1, 1]");
  const double h = std::clamp(yhat, -1.0 + kProbClamp, 1.0 - kProbClamp);
  return -0.5 * ((y + 1.0) * std::log1p(h) + (1.0 - y) * std::log1p(-h)) +
         std::numbers::ln2;
}

double bipolar_bce_grad(double y, double yhat) {
  check_bipolar(y);
  if (!(yhat >= -1.0 && yhat <= 1.0)) throw DomainError("yhat must lie in [-1, 1]");
  const double h = std::clamp(yhat, -1.0 + kProbClamp, 1.0 - kProbClamp);
  return -0.5 * ((y + 1.0) / (1.0 + h) - (1.0 - y) / (1.0 - h));
}

double cce(const OneHot& target, std::span<const double> probs) {
  check_lengths(target, probs.size());
  return -std::log(std::max(probs[target.index], kProbClamp));
}

std::vector<double> cce_grad(const OneHot& target, std::span<const double> probs) {
  check_lengths(target, probs.size());
  std::vector<double> g(probs.size(), 0.0);
  g[target.index] = -1.0 / std::max(probs[target.index], kProbClamp);
  return g;
}

double cce_from_logits(const OneHot& target, std::span<const double> logits) {
  check_lengths(target, logits.size());
  return log_sum_exp(logits) - logits[target.index];
}

std::vector<double> cce_from_logits_grad(const OneHot& target,
                                         std::span<const double> logits) {
  check_lengths(target, logits.size());
  const double lse = log_sum_exp(logits);
  std::vector<double> g(logits.size());
  for (std::size_t k = 0; k < logits.size(); ++k) {
    g[k] = std::exp(logits[k] - lse) - (k == target.index ? 1.0 : 0.0);
  }
  return g;
}

double focal(const OneHot& target, std::span<const double> probs, double gamma) {
  if (!(gamma >= 0.0)) throw DomainError("focal: gamma must be >= 0");
  check_lengths(target, probs.size());
  const double pt = std::max(probs[target.index], kProbClamp);
  return -std::pow(1.0 - pt, gamma) * std::log(pt);
}

std::vector<double> focal_grad(const OneHot& target, std::span<const double> probs,
                               double gamma) {
  if (!(gamma >= 0.0)) throw DomainError("focal: gamma must be >= 0");
  check_lengths(target, probs.size());
  const double pt = std::max(probs[target.index], kProbClamp);
  std::vector<double> g(probs.size(), 0.0);
  const double m = std::pow(1.0 - pt, gamma);
  double dm = 0.0;
  if (gamma != 0.0 && pt < 1.0) dm = -gamma * std::pow(1.0 - pt, gamma - 1.0);
  g[target.index] = -(dm * std::log(pt) + m / pt);
  return g;
}

std::string_view hinge_name(HingeKind kind) {
  switch (kind) {
    case HingeKind::kBinary:
      return "binary";
    case HingeKind::kSquared:
      return "squared";
    case HingeKind::kCrammerSinger:
      return "crammer_singer";
    case HingeKind::kWestonWatkins:
      return "weston_watkins";
  }
  throw DomainError("unknown hinge kind");
}

HingeKind parse_hinge(std::string_view name) {
  for (auto k : {HingeKind::kBinary, HingeKind::kSquared, HingeKind::kCrammerSinger,
                 HingeKind::kWestonWatkins}) {
    if (hinge_name(k) == name) return k;
  }
  throw DomainError("unknown hinge kind '" + std::string(name) +
                    "'; valid: binary, squared, crammer_singer, weston_watkins");
}

double hinge(HingeKind kind, double y, double score) {
  check_bipolar(y);
  const double m = std::max(0.0, 1.0 - y * score);
  switch (kind) {
    case HingeKind::kBinary:
      return m;
    case HingeKind::kSquared:
      return m * m;
    default:
      throw DomainError("multiclass hinge needs a one-hot target and score vector");
  }
}

double hinge_grad(HingeKind kind, double y, double score) {
  check_bipolar(y);
  const double m = 1.0 - y * score;
  switch (kind) {
    case HingeKind::kBinary:
      return m > 0.0 ? -y : 0.0;
    case HingeKind::kSquared:
      return m > 0.0 ? -2.0 * y * m : 0.0;
    default:
      throw DomainError("multiclass hinge needs a one-hot target and score vector");
  }
}

double hinge(HingeKind kind, const OneHot& target, std::span<const double> scores) {
  check_lengths(target, scores.size());
  const double sy = scores[target.index];
  switch (kind) {
    case HingeKind::kCrammerSinger:
      return std::max(0.0, 1.0 + scores[runner_up(target, scores)] - sy);
    case HingeKind::kWestonWatkins: {
      double total = 0.0;
      for (std::size_t k = 0; k < scores.size(); ++k) {
        if (k != target.index) total += std::max(0.0, 1.0 + scores[k] - sy);
      }
      return total;
    }
    default:
      throw DomainError("binary hinge needs a bipolar label and scalar score");
  }
}

std::vector<double> hinge_grad(HingeKind kind, const OneHot& target,
                               std::span<const double> scores) {
  check_lengths(target, scores.size());
  const double sy = scores[target.index];
  std::vector<double> g(scores.size(), 0.0);
  switch (kind) {
    case HingeKind::kCrammerSinger: {
      const std::size_t k = runner_up(target, scores);
      if (1.0 + scores[k] - sy > 0.0) {
        g[k] = 1.0;
        g[target.index] = -1.0;
      }
      return g;
    }
    case HingeKind::kWestonWatkins:
      for (std::size_t k = 0; k < scores.size(); ++k) {
        if (k != target.index && 1.0 + scores[k] - sy > 0.0) {
          g[k] += 1.0;
          g[target.index] -= 1.0;
        }
      }
      return g;
    default:
      throw DomainError("binary hinge needs a bipolar label and scalar score");
  }
}

}  // namespace llk
