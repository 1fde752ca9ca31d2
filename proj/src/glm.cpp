#include "llk/glm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "llk/activations.hpp"
#include "llk/error.hpp"
#include "llk/losses_classification.hpp"
#include "llk/losses_regression.hpp"
#include "llk/numerics.hpp"
#include "llk/random.hpp"

namespace llk {

namespace {

constexpr Family kFamilies[] = {Family::kGaussian,    Family::kLaplace,
                                Family::kBernoulli,   Family::kBernoulliBipolar,
                                Family::kMultinomial, Family::kPoisson,
                                Family::kGamma,       Family::kTweedie};

constexpr Link kLinks[] = {Link::kIdentity, Link::kLogit, Link::kGeneralizedLogit,
                           Link::kLog};

constexpr double kSeparationNorm = 1e3;

bool is_binary(Family f) {
  return f == Family::kBernoulli || f == Family::kBernoulliBipolar;
}

bool has_dispersion(Family f) {
  return f == Family::kGaussian || f == Family::kLaplace || f == Family::kGamma ||
         f == Family::kTweedie;
}

double sign(double x) { return (x > 0.0) - (x < 0.0); }

// Log-normalizer shared by every example; added once after averaging so it
// does not swamp the data-dependent part in the sum.
double nll_constant(const GlmFamily& fam) {
  switch (fam.name) {
    case Family::kGaussian:
      return 0.5 * std::log(2.0 * std::numbers::pi * fam.dispersion);
    case Family::kLaplace:
      return std::log(2.0 * fam.dispersion);
    default:
      return 0.0;
  }
}

// Per-example NLL as a function of the linear predictor (scalar families),
// without nll_constant.
double example_nll(const GlmFamily& fam, double y, double eta) {
  const double s = fam.dispersion;
  switch (fam.name) {
    case Family::kGaussian: {
      const double r = y - eta;
      return r * r / (2.0 * s);
    }
    case Family::kLaplace:
      return std::abs(y - eta) / s;
    case Family::kBernoulli:
      return bce_from_logits(y, eta);
    case Family::kBernoulliBipolar:
      return bce_from_logits(0.5 * (y + 1.0), eta);
    case Family::kPoisson:
      return std::exp(eta) - y * eta;
    case Family::kGamma:
      // Half the gamma deviance: y/mu + log mu - 1 - log y.
      return (y * std::exp(-eta) + eta - 1.0 - std::log(y)) / s;
    case Family::kTweedie: {
      const double p = fam.tweedie_p;
      const double half_dev = std::pow(y, 2.0 - p) / ((1.0 - p) * (2.0 - p)) -
                              y * std::exp((1.0 - p) * eta) / (1.0 - p) +
                              std::exp((2.0 - p) * eta) / (2.0 - p);
      return half_dev / s;
    }
    case Family::kMultinomial:
      break;
  }
  throw DomainError("example_nll: multinomial handled separately");
}

// dL/deta for scalar families.
double example_dnll(const GlmFamily& fam, double y, double eta) {
  const double s = fam.dispersion;
  switch (fam.name) {
    case Family::kGaussian:
      return (eta - y) / s;
    case Family::kLaplace:
      return sign(eta - y) / s;
    case Family::kBernoulli:
      return logistic(eta) - y;
    case Family::kBernoulliBipolar:
      return 0.5 * (std::tanh(0.5 * eta) - y);
    case Family::kPoisson:
      return std::exp(eta) - y;
    case Family::kGamma:
      return (1.0 - y * std::exp(-eta)) / s;
    case Family::kTweedie: {
      const double p = fam.tweedie_p;
      return (std::exp((2.0 - p) * eta) - y * std::exp((1.0 - p) * eta)) / s;
    }
    case Family::kMultinomial:
      break;
  }
  throw DomainError("example_dnll: multinomial handled separately");
}

void check_weights(const GlmFamily& fam, const Dataset& data, const Matrix& w) {
  const std::size_t rows = data.num_features() + 1;
  const std::size_t cols = weight_columns(fam, data);
  if (w.rows != rows || w.cols != cols) {
    throw DomainError("weight shape " + std::to_string(w.rows) + "x" +
                      std::to_string(w.cols) + " does not match dataset (expected " +
                      std::to_string(rows) + "x" + std::to_string(cols) + ")");
  }
}

double inf_norm(const Matrix& m) {
  double n = 0.0;
  for (double v : m.data) n = std::max(n, std::abs(v));
  return n;
}

double l2_norm(const Matrix& m) {
  double n = 0.0;
  for (double v : m.data) n += v * v;
  return std::sqrt(n);
}

bool all_finite(const Matrix& m) {
  return std::all_of(m.data.begin(), m.data.end(), [](double v) { return std::isfinite(v); });
}

// Searches for a hyperplane with every example strictly on its side, by
// perceptron updates warm-started from the fitted weights. Finding one proves
// the classes are linearly separable; giving up after the epoch cap does not
// prove the opposite.
bool perfectly_separated(const GlmFamily& fam, const Dataset& data, const Matrix& w) {
  constexpr int kMaxEpochs = 1000;
  const std::size_t d = data.num_features();
  std::vector<double> v(w.data.begin(), w.data.end());
  for (int epoch = 0; epoch < kMaxEpochs; ++epoch) {
    bool clean = true;
    for (std::size_t i = 0; i < data.size(); ++i) {
      const auto x = data.features.row(i);
      const bool positive = fam.name == Family::kBernoulli ? data.targets[i] > 0.5
                                                            : data.targets[i] > 0.0;
      const double s = positive ? 1.0 : -1.0;
      double eta = v[d];
      for (std::size_t j = 0; j < d; ++j) eta += v[j] * x[j];
      if (s * eta > 0.0) continue;
      clean = false;
      for (std::size_t j = 0; j < d; ++j) v[j] += s * x[j];
      v[d] += s;
    }
    if (clean) return true;
  }
  return false;
}

}  // namespace

std::string_view stop_reason_name(StopReason r) {
  switch (r) {
    case StopReason::kGradTol:
      return "grad_tol";
    case StopReason::kPrecisionFloor:
      return "precision_floor";
    case StopReason::kMaxIters:
      return "max_iters";
    case StopReason::kSeparation:
      return "separation";
  }
  return "unknown";
}

std::string_view family_name(Family f) {
  switch (f) {
    case Family::kGaussian:
      return "gaussian";
    case Family::kLaplace:
      return "laplace";
    case Family::kBernoulli:
      return "bernoulli";
    case Family::kBernoulliBipolar:
      return "bernoulli_bipolar";
    case Family::kMultinomial:
      return "multinomial";
    case Family::kPoisson:
      return "poisson";
    case Family::kGamma:
      return "gamma";
    case Family::kTweedie:
      return "tweedie";
  }
  throw DomainError("unknown family");
}

Family parse_family(std::string_view name) {
  for (auto f : kFamilies) {
    if (family_name(f) == name) return f;
  }
  std::string valid;
  for (auto f : kFamilies) {
    if (!valid.empty()) valid += ", ";
    valid += family_name(f);
  }
  throw DomainError("unknown family '" + std::string(name) + "'; valid: " + valid);
}

std::string_view link_name(Link l) {
  switch (l) {
    case Link::kIdentity:
      return "identity";
    case Link::kLogit:
      return "logit";
    case Link::kGeneralizedLogit:
      return "generalized_logit";
    case Link::kLog:
      return "log";
  }
  throw DomainError("unknown link");
}

Link parse_link(std::string_view name) {
  for (auto l : kLinks) {
    if (link_name(l) == name) return l;
  }
  throw DomainError("unknown link '" + std::string(name) +
                    "'; valid: identity, logit, generalized_logit, log");
}

Link GlmFamily::default_link(Family f) {
  switch (f) {
    case Family::kGaussian:
    case Family::kLaplace:
      return Link::kIdentity;
    case Family::kBernoulli:
    case Family::kBernoulliBipolar:
      return Link::kLogit;
    case Family::kMultinomial:
      return Link::kGeneralizedLogit;
    case Family::kPoisson:
    case Family::kGamma:
    case Family::kTweedie:
      return Link::kLog;
  }
  throw DomainError("unknown family");
}

GlmFamily GlmFamily::of(Family f) {
  GlmFamily g;
  g.name = f;
  g.link = default_link(f);
  return g;
}

void GlmFamily::validate() const {
  if (link != default_link(name)) {
    throw DomainError("link '" + std::string(link_name(link)) + "' is not supported for family '" +
                      std::string(family_name(name)) + "' (expected '" +
                      std::string(link_name(default_link(name))) + "')");
  }
  if (!(dispersion > 0.0) || !std::isfinite(dispersion)) {
    throw DomainError("dispersion must be > 0");
  }
  if (!has_dispersion(name) && dispersion != 1.0) {
    throw DomainError("family '" + std::string(family_name(name)) + "' has unit dispersion");
  }
  if (name == Family::kTweedie && !(tweedie_p > 1.0 && tweedie_p < 2.0)) {
    throw DomainError("tweedie_p must lie in (1, 2)");
  }
}

void Dataset::validate(const GlmFamily& family) const {
  const std::size_t n = size();
  if (n == 0) throw DomainError("dataset must contain at least one example");
  if (targets.size() != n) throw DomainError("targets length does not match feature rows");
  if (features.data.size() != features.rows * features.cols) {
    throw DomainError("feature matrix storage does not match its shape");
  }
  for (std::size_t i = 0; i < features.data.size(); ++i) {
    if (!std::isfinite(features.data[i])) {
      throw DomainError("non-finite feature at row " + std::to_string(i / features.cols) +
                        ", column " + std::to_string(i % features.cols));
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double y = targets[i];
    const std::string where = " (row " + std::to_string(i) + ")";
    if (!std::isfinite(y)) throw DomainError("non-finite target" + where);
    switch (family.name) {
      case Family::kBernoulli:
        if (y != 0.0 && y != 1.0) throw DomainError("bernoulli target must be 0 or 1" + where);
        break;
      case Family::kBernoulliBipolar:
        if (y != -1.0 && y != 1.0) {
          throw DomainError("bernoulli_bipolar target must be -1 or +1" + where);
        }
        break;
      case Family::kMultinomial:
        if (classes < 2) throw DomainError("multinomial dataset needs classes >= 2");
        if (y < 0.0 || y != std::floor(y) || y >= static_cast<double>(classes)) {
          throw DomainError("multinomial target must be a class index in [0, " +
                            std::to_string(classes) + ")" + where);
        }
        break;
      case Family::kPoisson:
      case Family::kTweedie:
        if (y < 0.0) throw DomainError("target must be >= 0" + where);
        break;
      case Family::kGamma:
        if (!(y > 0.0)) throw DomainError("gamma target must be > 0" + where);
        break;
      default:
        break;
    }
  }
}

void FitConfig::validate() const {
  if (!(learning_rate > 0.0)) throw DomainError("learning_rate must be > 0");
  if (max_iters < 1) throw DomainError("max_iters must be >= 1");
  if (!(grad_tol > 0.0)) throw DomainError("grad_tol must be > 0");
}

std::size_t weight_columns(const GlmFamily& family, const Dataset& data) {
  return family.name == Family::kMultinomial ? data.classes : 1;
}

double link(const GlmFamily& family, double mu) {
  switch (family.name) {
    case Family::kGaussian:
    case Family::kLaplace:
      return mu;
    case Family::kBernoulli:
      if (!(mu > 0.0 && mu < 1.0)) throw DomainError("logit link needs mu in (0, 1)");
      return std::log(mu) - std::log1p(-mu);
    case Family::kBernoulliBipolar:
      if (!(mu > -1.0 && mu < 1.0)) throw DomainError("bipolar link needs mu in (-1, 1)");
      return 2.0 * std::atanh(mu);
    case Family::kPoisson:
    case Family::kGamma:
    case Family::kTweedie:
      if (!(mu > 0.0)) throw DomainError("log link needs mu > 0");
      return std::log(mu);
    case Family::kMultinomial:
      break;
  }
  throw DomainError("multinomial link takes a probability vector");
}

std::vector<double> link(const GlmFamily& family, std::span<const double> mu) {
  if (family.name != Family::kMultinomial) {
    std::vector<double> out;
    out.reserve(mu.size());
    for (double m : mu) out.push_back(link(family, m));
    return out;
  }
  validate_prob_vector(mu);
  const double ref = mu.back();
  if (!(ref > 0.0)) throw DomainError("generalized logit needs positive probabilities");
  std::vector<double> out;
  out.reserve(mu.size());
  for (double m : mu) {
    if (!(m > 0.0)) throw DomainError("generalized logit needs positive probabilities");
    out.push_back(std::log(m / ref));
  }
  return out;
}

double inverse_link(const GlmFamily& family, double eta) {
  switch (family.name) {
    case Family::kGaussian:
    case Family::kLaplace:
      return eta;
    case Family::kBernoulli:
      return logistic(eta);
    case Family::kBernoulliBipolar:
      return std::tanh(0.5 * eta);
    case Family::kPoisson:
    case Family::kGamma:
    case Family::kTweedie:
      return std::exp(eta);
    case Family::kMultinomial:
      break;
  }
  throw DomainError("multinomial inverse link takes a vector");
}

std::vector<double> inverse_link(const GlmFamily& family, std::span<const double> eta) {
  if (family.name == Family::kMultinomial) return softmax(eta);
  std::vector<double> out;
  out.reserve(eta.size());
  for (double e : eta) out.push_back(inverse_link(family, e));
  return out;
}

std::vector<double> linear_predictor(const Matrix& weights, std::span<const double> x) {
  if (x.size() + 1 != weights.rows) {
    throw DomainError("feature vector has " + std::to_string(x.size()) +
                      " entries, model expects " + std::to_string(weights.rows - 1));
  }
  std::vector<double> eta(weights.row(x.size()).begin(), weights.row(x.size()).end());
  for (std::size_t j = 0; j < x.size(); ++j) {
    const auto wr = weights.row(j);
    for (std::size_t k = 0; k < weights.cols; ++k) eta[k] += x[j] * wr[k];
  }
  return eta;
}

namespace {

// Mean NLL without nll_constant.
double nll_variable(const GlmFamily& family, const Dataset& data, const Matrix& weights) {
  const std::size_t n = data.size();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto eta = linear_predictor(weights, data.features.row(i));
    if (family.name == Family::kMultinomial) {
      total += cce_from_logits(OneHot{static_cast<std::size_t>(data.targets[i]), data.classes}, eta);
    } else {
      total += example_nll(family, data.targets[i], eta[0]);
    }
  }
  return total / static_cast<double>(n);
}

double nll_unchecked(const GlmFamily& family, const Dataset& data, const Matrix& weights) {
  return nll_variable(family, data, weights) + nll_constant(family);
}

Matrix nll_grad_unchecked(const GlmFamily& family, const Dataset& data,
                          const Matrix& weights) {
  const std::size_t n = data.size();
  const std::size_t d = data.num_features();
  Matrix g(weights.rows, weights.cols);
  std::vector<double> delta(weights.cols);
  for (std::size_t i = 0; i < n; ++i) {
    const auto x = data.features.row(i);
    const auto eta = linear_predictor(weights, x);
    if (family.name == Family::kMultinomial) {
      const auto probs = softmax(eta);
      const auto cls = static_cast<std::size_t>(data.targets[i]);
      for (std::size_t k = 0; k < weights.cols; ++k) {
        delta[k] = probs[k] - (k == cls ? 1.0 : 0.0);
      }
    } else {
      delta[0] = example_dnll(family, data.targets[i], eta[0]);
    }
    for (std::size_t j = 0; j <= d; ++j) {
      const double xj = j < d ? x[j] : 1.0;
      for (std::size_t k = 0; k < weights.cols; ++k) g(j, k) += delta[k] * xj;
    }
  }
  for (double& v : g.data) v /= static_cast<double>(n);
  return g;
}

}  // namespace

double nll(const GlmFamily& family, const Dataset& data, const Matrix& weights) {
  family.validate();
  data.validate(family);
  check_weights(family, data, weights);
  return nll_unchecked(family, data, weights);
}

Matrix nll_grad(const GlmFamily& family, const Dataset& data, const Matrix& weights) {
  family.validate();
  data.validate(family);
  check_weights(family, data, weights);
  return nll_grad_unchecked(family, data, weights);
}

Matrix nll_grad_chain_rule(const GlmFamily& family, const Dataset& data,
                           const Matrix& weights) {
  family.validate();
  data.validate(family);
  check_weights(family, data, weights);
  const std::size_t n = data.size();
  const std::size_t d = data.num_features();
  const std::size_t kcols = weights.cols;
  Matrix g(weights.rows, kcols);
  std::vector<double> delta(kcols);
  const auto logistic_spec = ActivationSpec::defaults(ActivationKind::kLogistic);
  const auto tanh_spec = ActivationSpec::defaults(ActivationKind::kTanh);
  for (std::size_t i = 0; i < n; ++i) {
    const auto x = data.features.row(i);
    const auto eta = linear_predictor(weights, x);
    const double y = data.targets[i];
    switch (family.name) {
      case Family::kGaussian:
        // NLL = MSE / (2 sigma^2) + const, identity activation.
        delta[0] = reg_loss_grad(RegLossSpec::of(RegLossKind::kMse), y, eta[0]) /
                   (2.0 * family.dispersion);
        break;
      case Family::kBernoulli: {
        const double p = act_value(logistic_spec, eta[0]);
        delta[0] = bce_grad(y, p) * act_deriv(logistic_spec, eta[0]);
        break;
      }
      case Family::kBernoulliBipolar: {
        const double h = act_value(tanh_spec, 0.5 * eta[0]);
        delta[0] = bipolar_bce_grad(y, h) * 0.5 * act_deriv(tanh_spec, 0.5 * eta[0]);
        break;
      }
      case Family::kPoisson: {
        const double mu = std::exp(eta[0]);
        delta[0] = reg_loss_grad(RegLossSpec::of(RegLossKind::kPoisson), y, mu) * mu;
        break;
      }
      case Family::kMultinomial: {
        const auto probs = softmax(eta);
        const auto jac = softmax_jacobian(eta);
        const OneHot target{static_cast<std::size_t>(y), data.classes};
        const auto dl = cce_grad(target, probs);
        for (std::size_t k = 0; k < kcols; ++k) {
          double acc = 0.0;
          for (std::size_t m = 0; m < kcols; ++m) acc += dl[m] * jac[m * kcols + k];
          delta[k] = acc;
        }
        break;
      }
      default:
        throw UnsupportedError("chain-rule gradient not available for family '" +
                               std::string(family_name(family.name)) + "'");
    }
    for (std::size_t j = 0; j <= d; ++j) {
      const double xj = j < d ? x[j] : 1.0;
      for (std::size_t k = 0; k < kcols; ++k) g(j, k) += delta[k] * xj;
    }
  }
  for (double& v : g.data) v /= static_cast<double>(n);
  return g;
}

FitReport fit(const GlmFamily& family, const Dataset& data, const FitConfig& config) {
  family.validate();
  data.validate(family);
  config.validate();

  FitReport rep;
  rep.weights = Matrix(data.num_features() + 1, weight_columns(family, data));
  if (config.seed != 0) {
    Xoshiro256pp rng(config.seed);
    for (double& w : rep.weights.data) w = 0.02 * rng.uniform() - 0.01;
  }

  // Step acceptance compares the data-dependent part only.
  const double constant = nll_constant(family);
  double loss = nll_variable(family, data, rep.weights);
  Matrix grad = nll_grad_unchecked(family, data, rep.weights);
  if (!std::isfinite(loss) || !all_finite(grad)) {
    throw DivergenceError("non-finite NLL at the starting point (iteration 0)", 0);
  }
  rep.nll_history.push_back(loss + constant);

  long it = 0;
  bool stalled = false;
  double last_step = config.learning_rate;
  while (it < config.max_iters) {
    if (inf_norm(grad) <= config.grad_tol) break;
    if (is_binary(family.name) && l2_norm(rep.weights) > kSeparationNorm) break;
    ++it;

    Matrix cand(rep.weights.rows, rep.weights.cols);
    // The search starts at twice the last accepted step, capped at the
    // configured rate.
    double step = config.backtracking ? std::min(config.learning_rate, 2.0 * last_step)
                                      : config.learning_rate;
    double cand_loss = 0.0;
    bool accepted = false;
    const int max_halvings = config.backtracking ? 30 : 0;
    for (int h = 0; h <= max_halvings; ++h) {
      for (std::size_t k = 0; k < cand.data.size(); ++k) {
        cand.data[k] = rep.weights.data[k] - step * grad.data[k];
      }
      cand_loss = nll_variable(family, data, cand);
      if (!config.backtracking) {
        accepted = true;
        break;
      }
      if (std::isfinite(cand_loss) && cand_loss <= loss) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      // No decrease within 30 halvings: the iterate is stationary to
      // floating-point precision.
      stalled = true;
      --it;
      break;
    }
    if (!std::isfinite(cand_loss)) {
      throw DivergenceError("non-finite NLL at iteration " + std::to_string(it), it);
    }
    rep.weights = std::move(cand);
    grad = nll_grad_unchecked(family, data, rep.weights);
    if (!all_finite(grad)) {
      throw DivergenceError("non-finite gradient at iteration " + std::to_string(it), it);
    }
    if (config.backtracking && cand_loss > loss) {
      throw DivergenceError("NLL increased at iteration " + std::to_string(it), it);
    }
    const bool unchanged = cand_loss == loss;
    loss = cand_loss;
    last_step = step;
    rep.nll_history.push_back(loss + constant);
    if (config.backtracking && unchanged) {
      // The decrease is below the rounding of the NLL sum.
      stalled = true;
      break;
    }
  }

  rep.iterations = it;
  rep.final_nll = loss + constant;
  rep.grad_norm = inf_norm(grad);
  if (rep.grad_norm <= config.grad_tol) {
    rep.stop_reason = StopReason::kGradTol;
  } else if (stalled) {
    rep.stop_reason = StopReason::kPrecisionFloor;
  } else if (is_binary(family.name) && l2_norm(rep.weights) > kSeparationNorm) {
    rep.stop_reason = StopReason::kSeparation;
  } else {
    rep.stop_reason = StopReason::kMaxIters;
  }
  rep.converged = rep.stop_reason == StopReason::kGradTol ||
                  rep.stop_reason == StopReason::kPrecisionFloor;
  if (is_binary(family.name) && !rep.converged) {
    rep.separation_flag = l2_norm(rep.weights) > kSeparationNorm ||
                          (!stalled && perfectly_separated(family, data, rep.weights));
  }
  return rep;
}

std::vector<double> predict(const GlmFamily& family, const Matrix& weights,
                            std::span<const double> x) {
  family.validate();
  const auto eta = linear_predictor(weights, x);
  if (family.name == Family::kMultinomial) return softmax(eta);
  if (weights.cols != 1) throw DomainError("scalar family expects a single weight column");
  return {inverse_link(family, eta[0])};
}

}  // namespace llk
