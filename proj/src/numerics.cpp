#include "llk/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "llk/error.hpp"

namespace llk {

void FdConfig::validate() const {
  if (!(step > 0.0)) throw DomainError("FdConfig: step must be > 0");
  if (!(abs_tol > 0.0)) throw DomainError("FdConfig: abs_tol must be > 0");
  if (!(rel_tol > 0.0)) throw DomainError("FdConfig: rel_tol must be > 0");
}

bool FdConfig::accepts(double analytic, double numeric) const {
  return std::abs(analytic - numeric) <= abs_tol + rel_tol * std::abs(analytic);
}

double log_sum_exp(std::span<const double> xs) {
  if (xs.empty()) throw DomainError("log_sum_exp: empty input");
  const double m = *std::max_element(xs.begin(), xs.end());
  if (!std::isfinite(m)) return m;
  double acc = 0.0;
  for (double x : xs) acc += std::exp(x - m);
  return m + std::log(acc);
}

double stable_softplus(double z) {
  return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z)));
}

double logistic(double z) {
  const double e = std::exp(-std::abs(z));
  const double s = 1.0 / (1.0 + e);
  return z >= 0.0 ? s : e * s;
}

namespace {

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczosCoef = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

}  // namespace

double log_gamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError("log_gamma: x must be a positive finite real");
  }
  if (x < 0.5) {
    // Gamma(x) Gamma(1-x) = pi / sin(pi x); sin(pi x) > 0 on (0, 0.5).
    return std::log(std::numbers::pi / std::sin(std::numbers::pi * x)) -
           log_gamma(1.0 - x);
  }
  const double xm1 = x - 1.0;
  double a = kLanczosCoef[0];
  const double t = xm1 + kLanczosG + 0.5;
  for (std::size_t i = 1; i < kLanczosCoef.size(); ++i) {
    a += kLanczosCoef[i] / (xm1 + static_cast<double>(i));
  }
  return 0.5 * std::log(2.0 * std::numbers::pi) + (xm1 + 0.5) * std::log(t) -
         t + std::log(a);
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double normal_pdf(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

double xlogy(double x, double y) { return x == 0.0 ? 0.0 : x * std::log(y); }

double central_difference(const std::function<double(double)>& f, double z,
                          const FdConfig& cfg) {
  cfg.validate();
  const double h = cfg.step * std::max(1.0, std::abs(z));
  const double hi = f(z + h);
  const double lo = f(z - h);
  if (!std::isfinite(hi) || !std::isfinite(lo)) {
    throw std::runtime_error("central_difference: non-finite function value near z = " +
                             std::to_string(z));
  }
  return (hi - lo) / (2.0 * h);
}

}  // namespace llk
