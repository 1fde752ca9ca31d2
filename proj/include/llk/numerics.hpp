#pragma once

#include <functional>
#include <span>

namespace llk {

/// Central-difference settings shared by every derivative check.
struct FdConfig {
  double step = 1e-5;
  double abs_tol = 1e-6;
  double rel_tol = 1e-4;

  void validate() const;
  /// Mixed criterion: |analytic - numeric| <= abs_tol + rel_tol * |analytic|.
  bool accepts(double analytic, double numeric) const;
};

/// log(sum(exp(xs))) shifted by the maximum. Throws DomainError on empty input.
double log_sum_exp(std::span<const double> xs);

/// ln(1 + e^z) as max(z, 0) + log1p(e^-|z|).
double stable_softplus(double z);

/// Logistic sigmoid without overflow for any finite z.
double logistic(double z);

/// ln Gamma(x) for x > 0; Lanczos (g = 7, 9 terms), reflection below 0.5.
double log_gamma(double x);

/// Standard normal CDF and density.
double normal_cdf(double z);
double normal_pdf(double z);

/// x * log(y) with the convention 0 * log(anything) = 0.
double xlogy(double x, double y);

/// (f(z+h) - f(z-h)) / 2h with h = step * max(1, |z|). Throws
/// std::runtime_error if either evaluation is not finite.
double central_difference(const std::function<double(double)>& f, double z,
                          const FdConfig& cfg = {});

}  // namespace llk
