#include "llk/activations.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "llk/error.hpp"
#include "llk/numerics.hpp"

namespace llk {

namespace {

struct NamedKind {
  ActivationKind kind;
  std::string_view name;
};

constexpr NamedKind kNames[] = {
    {ActivationKind::kIdentity, "identity"},
    {ActivationKind::kLogistic, "logistic"},
    {ActivationKind::kTanh, "tanh"},
    {ActivationKind::kSoftplus, "softplus"},
    {ActivationKind::kRelu, "relu"},
    {ActivationKind::kLeakyRelu, "leaky_relu"},
    {ActivationKind::kPrelu, "prelu"},
    {ActivationKind::kShiftedRelu, "shifted_relu"},
    {ActivationKind::kElu, "elu"},
    {ActivationKind::kGelu, "gelu"},
    {ActivationKind::kSwish, "swish"},
    {ActivationKind::kMish, "mish"},
    {ActivationKind::kSquareplus, "squareplus"},
    {ActivationKind::kDelu, "delu"},
    {ActivationKind::kSoftsign, "softsign"},
    {ActivationKind::kArctan, "arctan"},
    {ActivationKind::kHeaviside, "heaviside"},
    {ActivationKind::kCrelu, "crelu"},
};

constexpr ActivationKind kAll[] = {
    ActivationKind::kIdentity,   ActivationKind::kLogistic,
    ActivationKind::kTanh,       ActivationKind::kSoftplus,
    ActivationKind::kRelu,       ActivationKind::kLeakyRelu,
    ActivationKind::kPrelu,      ActivationKind::kShiftedRelu,
    ActivationKind::kElu,        ActivationKind::kGelu,
    ActivationKind::kSwish,      ActivationKind::kMish,
    ActivationKind::kSquareplus, ActivationKind::kDelu,
    ActivationKind::kSoftsign,   ActivationKind::kArctan,
    ActivationKind::kHeaviside,  ActivationKind::kCrelu,
};

// The first 16 entries of kAll.
constexpr std::size_t kDifferentiableCount = 16;

double swish(double beta, double z) { return z * logistic(beta * z); }

}  // namespace

ActivationSpec ActivationSpec::defaults(ActivationKind kind) {
  ActivationSpec s;
  s.kind = kind;
  switch (kind) {
    case ActivationKind::kLeakyRelu:
      s.alpha = 0.01;
      break;
    case ActivationKind::kPrelu:
      s.alpha = 0.25;
      break;
    case ActivationKind::kShiftedRelu:
    case ActivationKind::kElu:
      s.alpha = 1.0;
      break;
    case ActivationKind::kDelu:
      s.alpha = 1.0;
      s.beta = 2.0;
      s.x_c = 1.25643;
      break;
    default:
      break;
  }
  return s;
}

void ActivationSpec::validate() const {
  if (!std::isfinite(alpha) || !std::isfinite(beta) || !std::isfinite(b) ||
      !std::isfinite(x_c)) {
    throw DomainError("activation: hyperparameters must be finite");
  }
  if (b < 0.0) throw DomainError("activation: b must be >= 0");
  if (kind == ActivationKind::kDelu) {
    if (beta == 0.0) throw DomainError("delu: beta must be nonzero");
    const double rhs = std::expm1(alpha * x_c) / beta;
    if (std::abs(x_c - rhs) > 1e-4) {
      throw DomainError("delu: x_c violates the continuity constraint x_c = (e^(alpha x_c) - 1)/beta");
    }
  }
}

std::string_view activation_name(ActivationKind kind) {
  for (const auto& n : kNames) {
    if (n.kind == kind) return n.name;
  }
  throw DomainError("unknown activation kind");
}

ActivationKind parse_activation(std::string_view name) {
  for (const auto& n : kNames) {
    if (n.name == name) return n.kind;
  }
  std::string valid;
  for (const auto& n : kNames) {
    if (!valid.empty()) valid += ", ";
    valid += n.name;
  }
  throw DomainError("unknown activation '" + std::string(name) + "'; valid: " + valid);
}

std::span<const ActivationKind> all_activation_kinds() { return kAll; }

std::span<const ActivationKind> differentiable_activation_kinds() {
  return std::span<const ActivationKind>(kAll).first(kDifferentiableCount);
}

double act_value(const ActivationSpec& spec, double z) {
  const double a = spec.alpha;
  switch (spec.kind) {
    case ActivationKind::kIdentity:
      return z;
    case ActivationKind::kLogistic:
      return logistic(z);
    case ActivationKind::kTanh:
      return std::tanh(z);
    case ActivationKind::kSoftplus:
      return stable_softplus(z);
    case ActivationKind::kRelu:
      return z > 0.0 ? z : 0.0;
    case ActivationKind::kLeakyRelu:
      return z > 0.0 ? z : a * z;
    case ActivationKind::kPrelu:
      return std::max(z, a * z);
    case ActivationKind::kShiftedRelu:
      return std::max(-a, z);
    case ActivationKind::kElu:
      return z > 0.0 ? z : a * std::expm1(z);
    case ActivationKind::kGelu:
      return z * normal_cdf(z);
    case ActivationKind::kSwish:
      return swish(spec.beta, z);
    case ActivationKind::kMish:
      return z * std::tanh(stable_softplus(z));
    case ActivationKind::kSquareplus:
      return 0.5 * (z + std::sqrt(z * z + spec.b));
    case ActivationKind::kDelu:
      return z > spec.x_c ? z : std::expm1(a * z) / spec.beta;
    case ActivationKind::kSoftsign:
      return z / (1.0 + std::abs(z));
    case ActivationKind::kArctan:
      return std::atan(z);
    case ActivationKind::kHeaviside:
      return z > 0.0 ? 1.0 : 0.0;
    case ActivationKind::kCrelu:
      throw UnsupportedError("crelu is vector-valued; use crelu()");
  }
  throw DomainError("unknown activation kind");
}

double act_deriv(const ActivationSpec& spec, double z) {
  const double a = spec.alpha;
  switch (spec.kind) {
    case ActivationKind::kIdentity:
      return 1.0;
    case ActivationKind::kLogistic: {
      const double s = logistic(z);
      return s * (1.0 - s);
    }
    case ActivationKind::kTanh: {
      const double t = std::tanh(z);
      return 1.0 - t * t;
    }
    case ActivationKind::kSoftplus:
      return logistic(z);
    case ActivationKind::kRelu:
      return z > 0.0 ? 1.0 : 0.0;
    case ActivationKind::kLeakyRelu:
      return z > 0.0 ? 1.0 : a;
    case ActivationKind::kPrelu:
      // max(z, a z) with a <= 1 picks z on the positive side.
      if (a <= 1.0) return z > 0.0 ? 1.0 : a;
      return z > 0.0 ? a : 1.0;
    case ActivationKind::kShiftedRelu:
      return z > -a ? 1.0 : 0.0;
    case ActivationKind::kElu:
      return z > 0.0 ? 1.0 : a * std::exp(z);
    case ActivationKind::kGelu:
      return normal_cdf(z) + z * normal_pdf(z);
    case ActivationKind::kSwish: {
      const double s = logistic(spec.beta * z);
      const double f = z * s;
      return spec.beta * f + s * (1.0 - spec.beta * f);
    }
    case ActivationKind::kMish: {
      const double t = std::tanh(stable_softplus(z));
      return t + z * (1.0 - t * t) * logistic(z);
    }
    case ActivationKind::kSquareplus: {
      const double r = std::sqrt(z * z + spec.b);
      if (r == 0.0) return 0.0;
      return 0.5 * (z / r + 1.0);
    }
    case ActivationKind::kDelu:
      return z > spec.x_c ? 1.0 : (a / spec.beta) * std::exp(a * z);
    case ActivationKind::kSoftsign: {
      const double d = 1.0 + std::abs(z);
      return 1.0 / (d * d);
    }
    case ActivationKind::kArctan:
      return 1.0 / (1.0 + z * z);
    case ActivationKind::kHeaviside:
      throw UnsupportedError(
          "heaviside: derivative is a Dirac delta and is not usable for gradient-based learning");
    case ActivationKind::kCrelu:
      throw UnsupportedError("crelu is vector-valued; use crelu_deriv()");
  }
  throw DomainError("unknown activation kind");
}

std::vector<double> activation_kinks(const ActivationSpec& spec) {
  switch (spec.kind) {
    case ActivationKind::kRelu:
    case ActivationKind::kLeakyRelu:
    case ActivationKind::kPrelu:
    case ActivationKind::kElu:
    case ActivationKind::kHeaviside:
    case ActivationKind::kCrelu:
      return {0.0};
    case ActivationKind::kShiftedRelu:
      return {-spec.alpha};
    case ActivationKind::kDelu:
      return {spec.x_c};
    case ActivationKind::kSquareplus:
      if (spec.b == 0.0) return {0.0};
      return {};
    default:
      return {};
  }
}

std::array<double, 2> crelu(double z) {
  return {z > 0.0 ? z : 0.0, z < 0.0 ? -z : 0.0};
}

std::array<double, 2> crelu_deriv(double z) {
  return {z > 0.0 ? 1.0 : 0.0, z < 0.0 ? -1.0 : 0.0};
}

std::vector<double> softmax(std::span<const double> xs) {
  if (xs.empty()) throw DomainError("softmax: empty input");
  const double m = *std::max_element(xs.begin(), xs.end());
  std::vector<double> out(xs.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) sum += out[i] = std::exp(xs[i] - m);
  for (double& v : out) v /= sum;
  return out;
}

std::vector<double> softmax_jacobian(std::span<const double> xs) {
  const std::vector<double> y = softmax(xs);
  const std::size_t k = y.size();
  std::vector<double> jac(k * k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      jac[i * k + j] = y[i] * ((i == j ? 1.0 : 0.0) - y[j]);
    }
  }
  return jac;
}

}  // namespace llk
