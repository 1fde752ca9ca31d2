#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "llk/glm.hpp"
#include "llk/losses_regression.hpp"
#include "llk/random.hpp"

namespace llk {

enum class NoiseDist {
  kGaussian,
  kLaplace,
  kDoublePareto,
  kPoisson,
  kGamma,
  kTweedie,
  kLognormal,
};

std::string_view noise_name(NoiseDist d);
NoiseDist parse_noise(std::string_view name);

/// Distribution plus named parameters. Recognised names and defaults:
///   gaussian      mu = 0, sigma = 1
///   laplace       mu = 0, b = 1
///   double_pareto mu = 0, alpha = 2    density (alpha/2) (1 + |x - mu|)^-(alpha + 1)
///   poisson       lambda = 1
///   gamma         shape = 1, rate = 1
///   tweedie       mu = 1, p = 1.5, phi = 1
///   lognormal     mu = 0, sigma = 1    (parameters of the underlying normal)
struct NoiseSpec {
  NoiseDist dist = NoiseDist::kGaussian;
  std::map<std::string, double, std::less<>> params;

  double param(std::string_view name) const;
  void validate() const;
  /// Names accepted for `dist`.
  static std::vector<std::string> param_names(NoiseDist dist);
};

// Single-draw samplers. Fixed consumption: a normal uses two uniforms
// (Box-Muller, cosine branch only), Laplace and double Pareto use inverse CDFs.
double draw_normal(Xoshiro256pp& rng);
double draw_gamma(Xoshiro256pp& rng, double shape, double rate);
std::int64_t draw_poisson(Xoshiro256pp& rng, double lambda);

/// n draws, reproducible from `seed`.
std::vector<double> sample(const NoiseSpec& spec, std::size_t n, std::uint64_t seed);

/// Compound Poisson-Gamma parameters matching a Tweedie(mu, p, phi) law:
/// N ~ Poisson(lambda), each jump ~ Gamma(shape, rate), with
///   lambda = mu^(2-p) / (phi (2-p)), shape = (2-p)/(p-1), rate = 1 / (phi (p-1) mu^(p-1)),
/// so E = lambda * shape / rate = mu and Var = phi mu^p.
struct CompoundPoissonGamma {
  double lambda;
  double shape;
  double rate;
};
CompoundPoissonGamma tweedie_compound(double mu, double p, double phi);

struct Grid {
  double lo = 0.0;
  double hi = 0.0;
  double step = 0.01;

  void validate() const;
  std::size_t size() const;
  double at(std::size_t k) const { return lo + static_cast<double>(k) * step; }
};

/// Grid point minimising the mean loss over `samples`; ties go to the
/// smaller value.
double brute_force_risk_minimizer(const RegLossSpec& loss, std::span<const double> samples,
                                  const Grid& grid);

enum class EstimatorKind { kMean, kMedian, kMode, kQuantile, kProbability };
std::string_view estimator_name(EstimatorKind k);

struct RecoveryReport {
  EstimatorKind estimator_kind = EstimatorKind::kMean;
  double target_value = 0.0;
  double recovered_value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::size_t n_samples = 0;
  std::uint64_t seed = 0;
};

/// Statistic that minimises the expected loss: mean for mse, median for mae,
/// mode for log_pareto, the tau-quantile for pinball. Other symmetric losses
/// report the median.
EstimatorKind estimator_for(const RegLossSpec& loss);

/// Analytic value of that statistic for `dist`. Throws DomainError when no
/// closed form is implemented for the pairing.
double analytic_target(const NoiseSpec& dist, const RegLossSpec& loss);

struct RecoveryOptions {
  double grid_step = 0.01;
  /// Half-width of the search window around the sample median.
  double window = 1.0;
  double tolerance = 0.02;
};

/// Samples from `dist`, minimises the empirical risk of `loss` on a grid
/// around the sample median and compares with `analytic_target`.
RecoveryReport estimator_recovery(const NoiseSpec& dist, const RegLossSpec& loss,
                                  std::size_t n, std::uint64_t seed,
                                  const RecoveryOptions& opts = {});

/// Draws Bernoulli(p) labels and minimises empirical BCE over the grid
/// {step, 2 step, ..., 1 - step}.
RecoveryReport bce_probability_recovery(double p, std::size_t n, std::uint64_t seed,
                                        double grid_step = 1e-3, double tolerance = 0.01);

/// Minimises the expected CCE sum_k q_k (-log p_k) over all probability vectors
/// whose entries are multiples of 1/resolution.
std::vector<double> cce_risk_minimizer(std::span<const double> q, int resolution);

struct RobustnessRow {
  RegLossSpec loss;
  double clean_minimizer = 0.0;
  double contaminated_minimizer = 0.0;
  double shift = 0.0;
};

struct RobustnessOptions {
  double outlier_value = 100.0;
  double grid_step = 0.01;
  NoiseSpec noise{};  // gaussian, mu = 0, sigma = 1
};

/// Standard-normal samples with the first round(contamination * n) replaced
/// by `outlier_value`; reports |minimizer(contaminated) - minimizer(clean)|
/// per loss on grids spanning each sample's range.
std::vector<RobustnessRow> outlier_robustness_sweep(std::span<const RegLossSpec> losses,
                                                    double contamination, std::size_t n,
                                                    std::uint64_t seed,
                                                    const RobustnessOptions& opts = {});

/// Synthetic GLM data: features uniform on [-feature_scale, feature_scale],
/// mean mu = inverse_link(x . w + bias) and targets drawn from the family
/// (gaussian with variance = dispersion, bernoulli, bernoulli_bipolar,
/// multinomial, poisson, gamma with shape 1/dispersion, tweedie). With
/// `noiseless` the targets are the means themselves (scalar families only).
Dataset synthetic_glm_dataset(const GlmFamily& family, const Matrix& true_weights,
                              std::size_t n, std::uint64_t seed, double feature_scale = 1.0,
                              bool noiseless = false);

}  // namespace llk
