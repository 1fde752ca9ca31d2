#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace llk {

enum class Family {
  kGaussian,
  kLaplace,
  kBernoulli,
  kBernoulliBipolar,
  kMultinomial,
  kPoisson,
  kGamma,
  kTweedie,
};

enum class Link { kIdentity, kLogit, kGeneralizedLogit, kLog };

std::string_view family_name(Family f);
Family parse_family(std::string_view name);
std::string_view link_name(Link l);
Link parse_link(std::string_view name);

/// Distribution + link pairing. `dispersion` is sigma^2 for gaussian, b for
/// laplace and phi for gamma/tweedie; the remaining families have unit
/// dispersion.
struct GlmFamily {
  Family name = Family::kGaussian;
  Link link = Link::kIdentity;
  double tweedie_p = 1.5;
  double dispersion = 1.0;

  /// Family with its canonical (or recommended log) link.
  static GlmFamily of(Family f);
  static Link default_link(Family f);
  void validate() const;
};

/// Dense row-major matrix.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0)
      : rows(r), cols(c), data(r * c, fill) {}

  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  std::span<const double> row(std::size_t r) const {
    return std::span<const double>(data).subspan(r * cols, cols);
  }
};

/// n x d features and n targets. The bias column of ones is implicit and sits
/// after the last feature, so weights have d + 1 rows. Multinomial targets are
/// class indices 0..classes-1 (the position of the 1 in each one-hot row).
struct Dataset {
  Matrix features;
  std::vector<double> targets;
  std::size_t classes = 0;

  std::size_t size() const { return features.rows; }
  std::size_t num_features() const { return features.cols; }
  void validate(const GlmFamily& family) const;
};

struct FitConfig {
  double learning_rate = 0.1;
  long max_iters = 10000;
  double grad_tol = 1e-8;
  bool backtracking = true;
  /// Seeds a small random initialisation; 0 keeps the all-zero start.
  unsigned long long seed = 0;

  void validate() const;
};

enum class StopReason {
  kGradTol,         // gradient infinity norm <= grad_tol
  kPrecisionFloor,  // no step changes the NLL in double precision
  kMaxIters,
  kSeparation,      // binary weights grew past the separation threshold
};

std::string_view stop_reason_name(StopReason r);

struct FitReport {
  Matrix weights;
  double final_nll = 0.0;
  long iterations = 0;
  /// True for kGradTol and kPrecisionFloor.
  bool converged = false;
  StopReason stop_reason = StopReason::kMaxIters;
  double grad_norm = 0.0;
  bool separation_flag = false;
  /// NLL after each accepted step; element 0 is the starting NLL.
  std::vector<double> nll_history;
};

/// Columns of the weight matrix: K for multinomial, 1 otherwise.
std::size_t weight_columns(const GlmFamily& family, const Dataset& data);

/// g(mu): mean scale to linear predictor. Multinomial maps a probability
/// vector to log(p_k / p_K) (last class as reference).
std::vector<double> link(const GlmFamily& family, std::span<const double> mu);
double link(const GlmFamily& family, double mu);

/// g^-1(eta): identity, logistic, tanh(eta / 2), softmax or exp.
std::vector<double> inverse_link(const GlmFamily& family, std::span<const double> eta);
double inverse_link(const GlmFamily& family, double eta);

/// Linear predictor(s) for one example: x . w plus bias row.
std::vector<double> linear_predictor(const Matrix& weights, std::span<const double> x);

/// Mean per-example negative log-likelihood with target-only constants
/// dropped. Gaussian keeps its 0.5 log(2 pi sigma^2) term.
double nll(const GlmFamily& family, const Dataset& data, const Matrix& weights);

/// Gradient of `nll` with respect to the weights, using the closed-form
/// per-example derivative dL/deta; for canonical links dL/deta = (mu - y)/s.
Matrix nll_grad(const GlmFamily& family, const Dataset& data, const Matrix& weights);

/// The same gradient assembled by the chain rule loss'(mu) * act'(eta) * x from
/// the loss and activation modules. Available for the families whose NLL is a
/// library loss: gaussian (MSE), bernoulli (BCE), bernoulli_bipolar
/// (bipolar BCE), multinomial (CCE with the softmax Jacobian) and poisson.
Matrix nll_grad_chain_rule(const GlmFamily& family, const Dataset& data,
                           const Matrix& weights);

/// Full-batch gradient descent from zero weights. Throws DivergenceError when
/// the NLL or gradient becomes non-finite.
FitReport fit(const GlmFamily& family, const Dataset& data, const FitConfig& config = {});

/// Mean-scale prediction for one feature vector (K entries for multinomial).
std::vector<double> predict(const GlmFamily& family, const Matrix& weights,
                            std::span<const double> x);

}  // namespace llk
