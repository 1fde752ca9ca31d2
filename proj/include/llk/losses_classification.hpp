#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace llk {

/// Probabilities are clamped to [kProbClamp, 1 - kProbClamp] before logs.
inline constexpr double kProbClamp = 1e-12;

/// Class index into a K-way one-hot vector.
struct OneHot {
  std::size_t index = 0;
  std::size_t length = 2;

  void validate() const;
};

/// Checks entries in [0, 1], length >= 2 and sum within 1e-9 of 1.
void validate_prob_vector(std::span<const double> probs);

// Binary cross-entropy. Targets are labels in {0, 1}; any y in [0, 1] is
// accepted so the same function evaluates conditional risks.
double bce(double y, double p);
double bce_grad(double y, double p);

// BCE composed with the logistic, evaluated as softplus(z) - y z.
double bce_from_logits(double y, double z);
double bce_from_logits_grad(double y, double z);

// BCE for bipolar targets y in {-1, +1} and predictions in (-1, 1).
double bipolar_bce(double y, double yhat);
double bipolar_bce_grad(double y, double yhat);

double cce(const OneHot& target, std::span<const double> probs);
/// Gradient with respect to every probability entry.
std::vector<double> cce_grad(const OneHot& target, std::span<const double> probs);

double cce_from_logits(const OneHot& target, std::span<const double> logits);
/// softmax(logits) - onehot.
std::vector<double> cce_from_logits_grad(const OneHot& target,
                                         std::span<const double> logits);

double focal(const OneHot& target, std::span<const double> probs, double gamma);
std::vector<double> focal_grad(const OneHot& target, std::span<const double> probs,
                               double gamma);

enum class HingeKind { kBinary, kSquared, kCrammerSinger, kWestonWatkins };

std::string_view hinge_name(HingeKind kind);
HingeKind parse_hinge(std::string_view name);

/// Binary kinds: bipolar label and one score.
double hinge(HingeKind kind, double y, double score);
double hinge_grad(HingeKind kind, double y, double score);

/// Multiclass kinds: standard margin forms
///   crammer_singer: max(0, 1 + max_{k != y} s_k - s_y)
///   weston_watkins: sum_{k != y} max(0, 1 + s_k - s_y)
double hinge(HingeKind kind, const OneHot& target, std::span<const double> scores);
std::vector<double> hinge_grad(HingeKind kind, const OneHot& target,
                               std::span<const double> scores);

}  // namespace llk
