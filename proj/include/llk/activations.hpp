#pragma once

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace llk {

enum class ActivationKind {
  kIdentity,
  kLogistic,
  kTanh,
  kSoftplus,
  kRelu,
  kLeakyRelu,
  kPrelu,
  kShiftedRelu,
  kElu,
  kGelu,
  kSwish,
  kMish,
  kSquareplus,
  kDelu,
  kSoftsign,
  kArctan,
  kHeaviside,
  kCrelu,
};

/// Activation kind plus its hyperparameters. Fields that a kind does not use
/// are ignored. `alpha` is the slope for leaky/PReLU, the floor magnitude for
/// the shifted ReLU and the exponent scale for ELU/DELU.
struct ActivationSpec {
  ActivationKind kind = ActivationKind::kIdentity;
  double alpha = 0.0;
  double beta = 1.0;
  double b = 1.0;
  double x_c = 1.25643;

  /// Spec with the conventional defaults for `kind`.
  static ActivationSpec defaults(ActivationKind kind);
  /// Throws DomainError when an invariant is broken (b < 0, DELU threshold
  /// off the continuity constraint, non-finite parameters).
  void validate() const;
};

std::string_view activation_name(ActivationKind kind);
/// Parses canonical snake_case names; throws DomainError listing valid names.
ActivationKind parse_activation(std::string_view name);
/// Every kind, in declaration order.
std::span<const ActivationKind> all_activation_kinds();
/// Kinds whose derivative is defined almost everywhere (excludes heaviside and crelu).
std::span<const ActivationKind> differentiable_activation_kinds();

double act_value(const ActivationSpec& spec, double z);

/// Analytic derivative. Kinks use the subgradient 0 for ReLU-like units on
/// the inactive side (relu'(0) = 0, leaky'(0) = prelu'(0) = alpha). Throws
/// UnsupportedError for heaviside and crelu.
double act_deriv(const ActivationSpec& spec, double z);

/// Points where `spec` is not differentiable; gradient checks stay clear of them.
std::vector<double> activation_kinks(const ActivationSpec& spec);

/// [relu(z), relu(-z)] and its elementwise derivative.
std::array<double, 2> crelu(double z);
std::array<double, 2> crelu_deriv(double z);

std::vector<double> softmax(std::span<const double> xs);

/// Row-major K x K Jacobian, J[i][j] = y_i (delta_ij - y_j).
std::vector<double> softmax_jacobian(std::span<const double> xs);

}  // namespace llk
