#include "llk/losses_regression.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "llk/error.hpp"
#include "llk/numerics.hpp"

namespace llk {

namespace {

struct NamedKind {
  RegLossKind kind;
  std::string_view name;
};

constexpr NamedKind kNames[] = {
    {RegLossKind::kMse, "mse"},
    {RegLossKind::kMae, "mae"},
    {RegLossKind::kHuber, "huber"},
    {RegLossKind::kLogCosh, "log_cosh"},
    {RegLossKind::kEpsInsensitive, "eps_insensitive"},
    {RegLossKind::kEpsInsensitiveSquared, "eps_insensitive_squared"},
    {RegLossKind::kHuberizedEps, "huberized_eps"},
    {RegLossKind::kPinball, "pinball"},
    {RegLossKind::kLogPareto, "log_pareto"},
    {RegLossKind::kCauchy, "cauchy"},
    {RegLossKind::kStudentT, "student_t"},
    {RegLossKind::kFair, "fair"},
    {RegLossKind::kTukey, "tukey"},
    {RegLossKind::kGammaDeviance, "gamma_deviance"},
    {RegLossKind::kPoisson, "poisson"},
    {RegLossKind::kPoissonDeviancePaper, "poisson_deviance_paper"},
    {RegLossKind::kTweediePaper, "tweedie_paper"},
    {RegLossKind::kTweedieFull, "tweedie_full"},
};

constexpr RegLossKind kAll[] = {
    RegLossKind::kMse,          RegLossKind::kMae,
    RegLossKind::kHuber,        RegLossKind::kLogCosh,
    RegLossKind::kEpsInsensitive, RegLossKind::kEpsInsensitiveSquared,
    RegLossKind::kHuberizedEps, RegLossKind::kPinball,
    RegLossKind::kLogPareto,    RegLossKind::kCauchy,
    RegLossKind::kStudentT,     RegLossKind::kFair,
    RegLossKind::kTukey,        RegLossKind::kGammaDeviance,
    RegLossKind::kPoisson,      RegLossKind::kPoissonDeviancePaper,
    RegLossKind::kTweediePaper, RegLossKind::kTweedieFull,
};

double sign(double x) { return (x > 0.0) - (x < 0.0); }

// log(cosh(r)) without overflow for large |r|.
double log_cosh(double r) {
  const double a = std::abs(r);
  return a + std::log1p(std::exp(-2.0 * a)) - std::numbers::ln2;
}

void check_positive_domain(const RegLossSpec& spec, double y, double yhat) {
  const std::string name(reg_loss_name(spec.kind));
  if (!(yhat > 0.0)) throw DomainError(name + ": yhat must be > 0");
  if (spec.kind == RegLossKind::kGammaDeviance) {
    if (!(y > 0.0)) throw DomainError(name + ": y must be > 0");
  } else if (!(y >= 0.0)) {
    throw DomainError(name + ": y must be >= 0");
  }
}

void check_inputs(const RegLossSpec& spec, double y, double yhat) {
  if (!std::isfinite(y)) throw DomainError("y must be finite");
  if (!std::isfinite(yhat)) throw DomainError("yhat must be finite");
  spec.validate();
  if (reg_loss_needs_positive(spec.kind)) check_positive_domain(spec, y, yhat);
}

}  // namespace

void RegLossSpec::validate() const {
  if (!(delta > 0.0)) throw DomainError("delta must be > 0");
  if (!(c > 0.0)) throw DomainError("c must be > 0");
  if (!(nu > 0.0)) throw DomainError("nu must be > 0");
  if (!(sigma > 0.0)) throw DomainError("sigma must be > 0");
  if (!(eps >= 0.0)) throw DomainError("eps must be >= 0");
  if (!(tau > 0.0 && tau < 1.0)) throw DomainError("tau must lie in (0, 1)");
  if ((kind == RegLossKind::kTweediePaper || kind == RegLossKind::kTweedieFull) &&
      !(p > 1.0 && p < 2.0)) {
    throw DomainError("p must lie in (1, 2) for tweedie losses");
  }
}

std::string_view reg_loss_name(RegLossKind kind) {
  for (const auto& n : kNames) {
    if (n.kind == kind) return n.name;
  }
  throw DomainError("unknown regression loss kind");
}

bool is_reg_loss_name(std::string_view name) {
  for (const auto& n : kNames) {
    if (n.name == name) return true;
  }
  return false;
}

RegLossKind parse_reg_loss(std::string_view name) {
  for (const auto& n : kNames) {
    if (n.name == name) return n.kind;
  }
  std::string valid;
  for (const auto& n : kNames) {
    if (!valid.empty()) valid += ", ";
    valid += n.name;
  }
  throw DomainError("unknown loss '" + std::string(name) + "'; valid: " + valid);
}

std::span<const RegLossKind> all_reg_loss_kinds() { return kAll; }

bool reg_loss_needs_positive(RegLossKind kind) {
  switch (kind) {
    case RegLossKind::kGammaDeviance:
    case RegLossKind::kPoisson:
    case RegLossKind::kPoissonDeviancePaper:
    case RegLossKind::kTweediePaper:
    case RegLossKind::kTweedieFull:
      return true;
    default:
      return false;
  }
}

double reg_loss(const RegLossSpec& spec, double y, double yhat) {
  check_inputs(spec, y, yhat);
  const double r = y - yhat;
  const double a = std::abs(r);
  switch (spec.kind) {
    case RegLossKind::kMse:
      return r * r;
    case RegLossKind::kMae:
      return a;
    case RegLossKind::kHuber:
      return a <= spec.delta ? 0.5 * r * r : spec.delta * (a - 0.5 * spec.delta);
    case RegLossKind::kLogCosh:
      return log_cosh(r);
    case RegLossKind::kEpsInsensitive:
      return a > spec.eps ? a - spec.eps : 0.0;
    case RegLossKind::kEpsInsensitiveSquared: {
      const double e = a > spec.eps ? a - spec.eps : 0.0;
      return e * e;
    }
    case RegLossKind::kHuberizedEps: {
      if (a <= spec.eps) return 0.0;
      const double e = a - spec.eps;
      if (e <= spec.delta) return e * e / (2.0 * spec.delta);
      return e - 0.5 * spec.delta;
    }
    case RegLossKind::kPinball:
      return r >= 0.0 ? spec.tau * r : (1.0 - spec.tau) * (-r);
    case RegLossKind::kLogPareto:
      return std::log1p(a);
    case RegLossKind::kCauchy:
      return std::log1p(r * r / (spec.c * spec.c));
    case RegLossKind::kStudentT:
      return 0.5 * (spec.nu + 1.0) *
             std::log1p(r * r / (spec.nu * spec.sigma * spec.sigma));
    case RegLossKind::kFair: {
      const double u = a / spec.c;
      return spec.c * spec.c * (u - std::log1p(u));
    }
    case RegLossKind::kTukey: {
      const double c2 = spec.c * spec.c;
      if (a > spec.c) return c2 / 6.0;
      const double v = 1.0 - r * r / c2;
      return c2 / 6.0 * (1.0 - v * v * v);
    }
    case RegLossKind::kGammaDeviance:
      return 2.0 * (r / yhat - std::log(y / yhat));
    case RegLossKind::kPoisson:
      return yhat - xlogy(y, yhat);
    case RegLossKind::kPoissonDeviancePaper:
      return 2.0 * (yhat - xlogy(y, yhat));
    case RegLossKind::kTweediePaper: {
      const double p = spec.p;
      return 2.0 / (1.0 - p) *
             (y * std::pow(yhat, 1.0 - p) - std::pow(y, 2.0 - p) / (2.0 - p));
    }
    case RegLossKind::kTweedieFull: {
      const double p = spec.p;
      return 2.0 * (std::pow(y, 2.0 - p) / ((1.0 - p) * (2.0 - p)) -
                    y * std::pow(yhat, 1.0 - p) / (1.0 - p) +
                    std::pow(yhat, 2.0 - p) / (2.0 - p));
    }
  }
  throw DomainError("unknown regression loss kind");
}

double reg_loss_grad(const RegLossSpec& spec, double y, double yhat) {
  check_inputs(spec, y, yhat);
  const double r = y - yhat;
  const double a = std::abs(r);
  switch (spec.kind) {
    case RegLossKind::kMse:
      return -2.0 * r;
    case RegLossKind::kMae:
      return -sign(r);
    case RegLossKind::kHuber:
      return a <= spec.delta ? -r : -spec.delta * sign(r);
    case RegLossKind::kLogCosh:
      return -std::tanh(r);
    case RegLossKind::kEpsInsensitive:
      return a > spec.eps ? -sign(r) : 0.0;
    case RegLossKind::kEpsInsensitiveSquared:
      return a > spec.eps ? -2.0 * sign(r) * (a - spec.eps) : 0.0;
    case RegLossKind::kHuberizedEps: {
      if (a <= spec.eps) return 0.0;
      const double e = a - spec.eps;
      if (e <= spec.delta) return -sign(r) * e / spec.delta;
      return -sign(r);
    }
    case RegLossKind::kPinball:
      if (r > 0.0) return -spec.tau;
      if (r < 0.0) return 1.0 - spec.tau;
      return 0.0;
    case RegLossKind::kLogPareto:
      return -sign(r) / (1.0 + a);
    case RegLossKind::kCauchy:
      return -2.0 * r / (spec.c * spec.c + r * r);
    case RegLossKind::kStudentT:
      return -(spec.nu + 1.0) * r / (r * r + spec.sigma * spec.sigma * spec.nu);
    case RegLossKind::kFair:
      return -r / (1.0 + a / spec.c);
    case RegLossKind::kTukey: {
      if (a >= spec.c) return 0.0;
      const double v = 1.0 - r * r / (spec.c * spec.c);
      return -r * v * v;
    }
    case RegLossKind::kGammaDeviance:
      return 2.0 * (yhat - y) / (yhat * yhat);
    case RegLossKind::kPoisson:
      return 1.0 - y / yhat;
    case RegLossKind::kPoissonDeviancePaper:
      return 2.0 * (1.0 - y / yhat);
    case RegLossKind::kTweediePaper:
      return 2.0 * y * std::pow(yhat, -spec.p);
    case RegLossKind::kTweedieFull:
      return 2.0 * std::pow(yhat, -spec.p) * (yhat - y);
  }
  throw DomainError("unknown regression loss kind");
}

std::vector<double> reg_loss_kinks(const RegLossSpec& spec) {
  switch (spec.kind) {
    case RegLossKind::kMae:
    case RegLossKind::kPinball:
    case RegLossKind::kLogPareto:
    case RegLossKind::kFair:
      return {0.0};
    case RegLossKind::kHuber:
      return {-spec.delta, spec.delta};
    case RegLossKind::kEpsInsensitive:
    case RegLossKind::kEpsInsensitiveSquared:
      return {-spec.eps, spec.eps};
    case RegLossKind::kHuberizedEps:
      return {-spec.eps - spec.delta, -spec.eps, spec.eps, spec.eps + spec.delta};
    case RegLossKind::kTukey:
      return {-spec.c, spec.c};
    default:
      return {};
  }
}

double log_scale_predict(double nu_hat, double sigma2) {
  if (!(sigma2 >= 0.0)) throw DomainError("sigma2 must be >= 0");
  return std::exp(nu_hat + 0.5 * sigma2);
}

}  // namespace llk
