#pragma once

#include <span>
#include <string_view>
#include <vector>

namespace llk {

enum class RegLossKind {
  kMse,
  kMae,
  kHuber,
  kLogCosh,
  kEpsInsensitive,
  kEpsInsensitiveSquared,
  kHuberizedEps,
  kPinball,
  kLogPareto,
  kCauchy,
  kStudentT,
  kFair,
  kTukey,
  kGammaDeviance,
  kPoisson,
  kPoissonDeviancePaper,
  kTweediePaper,
  kTweedieFull,
};

/// Regression loss kind plus hyperparameters; unused fields are ignored.
struct RegLossSpec {
  RegLossKind kind = RegLossKind::kMse;
  double delta = 1.0;  // Huber, huberized eps-insensitive
  double c = 1.0;      // Cauchy, Fair, Tukey
  double nu = 3.0;     // Student-t degrees of freedom
  double sigma = 1.0;  // Student-t scale
  double eps = 0.1;    // insensitive tube half-width
  double tau = 0.5;    // pinball quantile
  double p = 1.5;      // Tweedie power

  static RegLossSpec of(RegLossKind kind) {
    RegLossSpec s;
    s.kind = kind;
    return s;
  }
  void validate() const;
};

std::string_view reg_loss_name(RegLossKind kind);
RegLossKind parse_reg_loss(std::string_view name);
bool is_reg_loss_name(std::string_view name);
std::span<const RegLossKind> all_reg_loss_kinds();

/// Kinds defined only for positive predictions (and nonnegative targets).
bool reg_loss_needs_positive(RegLossKind kind);

/// Per-example loss for target `y` and prediction `yhat`.
///
/// The deviance kinds require yhat > 0 and y >= 0 (y > 0 for gamma_deviance);
/// violations throw DomainError naming the parameter. `poisson` is the
/// mean-scale negative log-likelihood yhat - y log yhat with log y! dropped;
/// `poisson_deviance_paper` is twice that. `tweedie_paper` is the two-term
/// form 2/(1-p) (y yhat^(1-p) - y^(2-p)/(2-p)); `tweedie_full` is the unit
/// deviance including the yhat^(2-p)/(2-p) term, which vanishes at yhat = y.
double reg_loss(const RegLossSpec& spec, double y, double yhat);

/// d reg_loss / d yhat. Exactly 0 at non-differentiable points (r = 0 for
/// MAE-like kinds, the tube boundary, |r| = c for Tukey).
double reg_loss_grad(const RegLossSpec& spec, double y, double yhat);

/// Residuals r = y - yhat where the loss or its gradient is not smooth.
std::vector<double> reg_loss_kinks(const RegLossSpec& spec);

/// Bias-corrected back-transform of a log-scale prediction: exp(nu_hat + sigma2/2).
double log_scale_predict(double nu_hat, double sigma2);

}  // namespace llk
