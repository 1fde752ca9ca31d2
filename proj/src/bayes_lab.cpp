#include "llk/bayes_lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "llk/error.hpp"
#include "llk/numerics.hpp"

namespace llk {

namespace {

constexpr NoiseDist kDists[] = {NoiseDist::kGaussian, NoiseDist::kLaplace,
                                NoiseDist::kDoublePareto, NoiseDist::kPoisson,
                                NoiseDist::kGamma,    NoiseDist::kTweedie,
                                NoiseDist::kLognormal};

struct ParamDefault {
  std::string_view name;
  double value;
};

std::vector<ParamDefault> defaults_for(NoiseDist d) {
  switch (d) {
    case NoiseDist::kGaussian:
      return {{"mu", 0.0}, {"sigma", 1.0}};
    case NoiseDist::kLaplace:
      return {{"mu", 0.0}, {"b", 1.0}};
    case NoiseDist::kDoublePareto:
      return {{"mu", 0.0}, {"alpha", 2.0}};
    case NoiseDist::kPoisson:
      return {{"lambda", 1.0}};
    case NoiseDist::kGamma:
      return {{"shape", 1.0}, {"rate", 1.0}};
    case NoiseDist::kTweedie:
      return {{"mu", 1.0}, {"p", 1.5}, {"phi", 1.0}};
    case NoiseDist::kLognormal:
      return {{"mu", 0.0}, {"sigma", 1.0}};
  }
  return {};
}

bool is_location_family(NoiseDist d) {
  return d == NoiseDist::kGaussian || d == NoiseDist::kLaplace ||
         d == NoiseDist::kDoublePareto;
}

// Inverse standard normal CDF by bisection on normal_cdf.
double normal_quantile(double tau) {
  double lo = -40.0;
  double hi = 40.0;
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    const double mid = 0.5 * (lo + hi);
    (normal_cdf(mid) < tau ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Hormann's PTRS transformed rejection sampler for lambda > 30.
std::int64_t draw_poisson_ptrs(Xoshiro256pp& rng, double lambda) {
  const double slam = std::sqrt(lambda);
  const double loglam = std::log(lambda);
  const double b = 0.931 + 2.53 * slam;
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double vr = 0.9277 - 3.6224 / (b - 2.0);
  for (;;) {
    const double u = rng.uniform() - 0.5;
    const double v = rng.uniform();
    const double us = 0.5 - std::abs(u);
    const auto k = static_cast<std::int64_t>(std::floor((2.0 * a / us + b) * u + lambda + 0.43));
    if (us >= 0.07 && v <= vr) return k;
    if (k < 0 || (us < 0.013 && v > us)) continue;
    if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
        -lambda + static_cast<double>(k) * loglam - log_gamma(static_cast<double>(k) + 1.0)) {
      return k;
    }
  }
}

double mean_loss(const RegLossSpec& loss, std::span<const double> samples, double yhat) {
  double total = 0.0;
  for (double y : samples) total += reg_loss(loss, y, yhat);
  return total / static_cast<double>(samples.size());
}

double sample_median(std::vector<double> xs) {
  const std::size_t mid = xs.size() / 2;
  std::nth_element(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(mid), xs.end());
  const double upper = xs[mid];
  if (xs.size() % 2 == 1) return upper;
  const double lower = *std::max_element(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

}  // namespace

std::string_view noise_name(NoiseDist d) {
  switch (d) {
    case NoiseDist::kGaussian:
      return "gaussian";
    case NoiseDist::kLaplace:
      return "laplace";
    case NoiseDist::kDoublePareto:
      return "double_pareto";
    case NoiseDist::kPoisson:
      return "poisson";
    case NoiseDist::kGamma:
      return "gamma";
    case NoiseDist::kTweedie:
      return "tweedie";
    case NoiseDist::kLognormal:
      return "lognormal";
  }
  throw DomainError("unknown distribution");
}

NoiseDist parse_noise(std::string_view name) {
  std::string norm(name);
  std::replace(norm.begin(), norm.end(), '-', '_');
  for (auto d : kDists) {
    if (noise_name(d) == norm) return d;
  }
  throw DomainError("unknown distribution '" + std::string(name) +
                    "'; valid: gaussian, laplace, double_pareto, poisson, gamma, tweedie, lognormal");
}

double NoiseSpec::param(std::string_view name) const {
  if (auto it = params.find(name); it != params.end()) return it->second;
  for (const auto& d : defaults_for(dist)) {
    if (d.name == name) return d.value;
  }
  throw DomainError("distribution '" + std::string(noise_name(dist)) +
                    "' has no parameter '" + std::string(name) + "'");
}

std::vector<std::string> NoiseSpec::param_names(NoiseDist dist) {
  std::vector<std::string> out;
  for (const auto& d : defaults_for(dist)) out.emplace_back(d.name);
  return out;
}

void NoiseSpec::validate() const {
  const auto names = param_names(dist);
  for (const auto& [key, value] : params) {
    if (std::find(names.begin(), names.end(), key) == names.end()) {
      throw DomainError("distribution '" + std::string(noise_name(dist)) +
                        "' has no parameter '" + key + "'");
    }
    if (!std::isfinite(value)) throw DomainError("parameter '" + key + "' must be finite");
  }
  auto positive = [&](std::string_view n) {
    if (!(param(n) > 0.0)) throw DomainError("parameter '" + std::string(n) + "' must be > 0");
  };
  switch (dist) {
    case NoiseDist::kGaussian:
    case NoiseDist::kLognormal:
      positive("sigma");
      break;
    case NoiseDist::kLaplace:
      positive("b");
      break;
    case NoiseDist::kDoublePareto:
      positive("alpha");
      break;
    case NoiseDist::kPoisson:
      if (!(param("lambda") >= 0.0)) throw DomainError("parameter 'lambda' must be >= 0");
      break;
    case NoiseDist::kGamma:
      positive("shape");
      positive("rate");
      break;
    case NoiseDist::kTweedie: {
      positive("mu");
      positive("phi");
      const double p = param("p");
      if (!(p > 1.0 && p < 2.0)) throw DomainError("parameter 'p' must lie in (1, 2)");
      break;
    }
  }
}

double draw_normal(Xoshiro256pp& rng) {
  const double u1 = rng.uniform_open();
  const double u2 = rng.uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double draw_gamma(Xoshiro256pp& rng, double shape, double rate) {
  if (!(shape > 0.0) || !(rate > 0.0)) throw DomainError("gamma: shape and rate must be > 0");
  if (shape < 1.0) {
    // Boost: Gamma(a) = Gamma(a + 1) * U^(1/a).
    const double g = draw_gamma(rng, shape + 1.0, 1.0);
    return g * std::pow(rng.uniform_open(), 1.0 / shape) / rate;
  }
  // Marsaglia-Tsang squeeze.
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    const double x = draw_normal(rng);
    double v = 1.0 + c * x;
    if (v <= 0.0) continue;
    v = v * v * v;
    const double u = rng.uniform_open();
    if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) return d * v / rate;
  }
}

std::int64_t draw_poisson(Xoshiro256pp& rng, double lambda) {
  if (!(lambda >= 0.0)) throw DomainError("poisson: lambda must be >= 0");
  if (lambda == 0.0) return 0;
  if (lambda > 30.0) return draw_poisson_ptrs(rng, lambda);
  // Knuth: multiply uniforms until the product drops below e^-lambda.
  const double limit = std::exp(-lambda);
  std::int64_t k = 0;
  double prod = rng.uniform();
  while (prod > limit) {
    ++k;
    prod *= rng.uniform();
  }
  return k;
}

CompoundPoissonGamma tweedie_compound(double mu, double p, double phi) {
  if (!(mu > 0.0) || !(phi > 0.0) || !(p > 1.0 && p < 2.0)) {
    throw DomainError("tweedie: need mu > 0, phi > 0, 1 < p < 2");
  }
  return {std::pow(mu, 2.0 - p) / (phi * (2.0 - p)), (2.0 - p) / (p - 1.0),
          1.0 / (phi * (p - 1.0) * std::pow(mu, p - 1.0))};
}

std::vector<double> sample(const NoiseSpec& spec, std::size_t n, std::uint64_t seed) {
  spec.validate();
  if (n == 0) throw DomainError("sample: n must be >= 1");
  Xoshiro256pp rng(seed);
  std::vector<double> out(n);
  switch (spec.dist) {
    case NoiseDist::kGaussian: {
      const double mu = spec.param("mu");
      const double sigma = spec.param("sigma");
      for (auto& x : out) x = mu + sigma * draw_normal(rng);
      break;
    }
    case NoiseDist::kLaplace: {
      const double mu = spec.param("mu");
      const double b = spec.param("b");
      for (auto& x : out) {
        const double u = rng.uniform_open() - 0.5;
        x = mu - b * ((u > 0.0) - (u < 0.0)) * std::log1p(-2.0 * std::abs(u));
      }
      break;
    }
    case NoiseDist::kDoublePareto: {
      const double mu = spec.param("mu");
      const double alpha = spec.param("alpha");
      for (auto& x : out) {
        const double s = rng.uniform() < 0.5 ? -1.0 : 1.0;
        const double v = rng.uniform();
        x = mu + s * std::expm1(-std::log1p(-v) / alpha);
      }
      break;
    }
    case NoiseDist::kPoisson: {
      const double lambda = spec.param("lambda");
      for (auto& x : out) x = static_cast<double>(draw_poisson(rng, lambda));
      break;
    }
    case NoiseDist::kGamma: {
      const double shape = spec.param("shape");
      const double rate = spec.param("rate");
      for (auto& x : out) x = draw_gamma(rng, shape, rate);
      break;
    }
    case NoiseDist::kTweedie: {
      const auto cpg = tweedie_compound(spec.param("mu"), spec.param("p"), spec.param("phi"));
      for (auto& x : out) {
        const std::int64_t jumps = draw_poisson(rng, cpg.lambda);
        double total = 0.0;
        for (std::int64_t j = 0; j < jumps; ++j) total += draw_gamma(rng, cpg.shape, cpg.rate);
        x = total;
      }
      break;
    }
    case NoiseDist::kLognormal: {
      const double mu = spec.param("mu");
      const double sigma = spec.param("sigma");
      for (auto& x : out) x = std::exp(mu + sigma * draw_normal(rng));
      break;
    }
  }
  return out;
}

void Grid::validate() const {
  if (!(step > 0.0)) throw DomainError("grid step must be > 0");
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(hi >= lo)) {
    throw DomainError("grid bounds must be finite with lo <= hi");
  }
}

std::size_t Grid::size() const {
  return static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
}

double brute_force_risk_minimizer(const RegLossSpec& loss, std::span<const double> samples,
                                  const Grid& grid) {
  if (samples.empty()) throw DomainError("brute_force_risk_minimizer: empty samples");
  grid.validate();
  loss.validate();
  const std::size_t count = grid.size();
  double best = grid.at(0);
  double best_risk = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < count; ++k) {
    const double yhat = grid.at(k);
    const double risk = mean_loss(loss, samples, yhat);
    if (risk < best_risk) {
      best_risk = risk;
      best = yhat;
    }
  }
  return best;
}

std::string_view estimator_name(EstimatorKind k) {
  switch (k) {
    case EstimatorKind::kMean:
      return "mean";
    case EstimatorKind::kMedian:
      return "median";
    case EstimatorKind::kMode:
      return "mode";
    case EstimatorKind::kQuantile:
      return "quantile";
    case EstimatorKind::kProbability:
      return "probability";
  }
  throw DomainError("unknown estimator kind");
}

EstimatorKind estimator_for(const RegLossSpec& loss) {
  switch (loss.kind) {
    case RegLossKind::kMse:
      return EstimatorKind::kMean;
    case RegLossKind::kMae:
      return EstimatorKind::kMedian;
    case RegLossKind::kLogPareto:
      return EstimatorKind::kMode;
    case RegLossKind::kPinball:
      return EstimatorKind::kQuantile;
    default:
      return EstimatorKind::kMedian;
  }
}

double analytic_target(const NoiseSpec& dist, const RegLossSpec& loss) {
  dist.validate();
  loss.validate();
  const EstimatorKind kind = estimator_for(loss);
  if (is_location_family(dist.dist)) {
    const double mu = dist.param("mu");
    if (kind != EstimatorKind::kQuantile) return mu;
    const double tau = loss.tau;
    switch (dist.dist) {
      case NoiseDist::kGaussian:
        return mu + dist.param("sigma") * normal_quantile(tau);
      case NoiseDist::kLaplace: {
        const double b = dist.param("b");
        return tau < 0.5 ? mu + b * std::log(2.0 * tau) : mu - b * std::log(2.0 * (1.0 - tau));
      }
      case NoiseDist::kDoublePareto: {
        // P(X > mu + t) = (1 + t)^-alpha / 2 for t >= 0.
        const double alpha = dist.param("alpha");
        const double tail = tau < 0.5 ? tau : 1.0 - tau;
        const double t = std::pow(2.0 * tail, -1.0 / alpha) - 1.0;
        return tau < 0.5 ? mu - t : mu + t;
      }
      default:
        break;
    }
  }
  if (kind == EstimatorKind::kMean) {
    switch (dist.dist) {
      case NoiseDist::kPoisson:
        return dist.param("lambda");
      case NoiseDist::kGamma:
        return dist.param("shape") / dist.param("rate");
      case NoiseDist::kTweedie:
        return dist.param("mu");
      case NoiseDist::kLognormal: {
        const double s = dist.param("sigma");
        return log_scale_predict(dist.param("mu"), s * s);
      }
      default:
        break;
    }
  }
  if (dist.dist == NoiseDist::kLognormal) {
    const double mu = dist.param("mu");
    const double s = dist.param("sigma");
    if (kind == EstimatorKind::kMedian) return std::exp(mu);
    if (kind == EstimatorKind::kMode) return std::exp(mu - s * s);
  }
  throw DomainError("no analytic " + std::string(estimator_name(kind)) + " for distribution '" +
                    std::string(noise_name(dist.dist)) + "'");
}

RecoveryReport estimator_recovery(const NoiseSpec& dist, const RegLossSpec& loss,
                                  std::size_t n, std::uint64_t seed,
                                  const RecoveryOptions& opts) {
  if (!(opts.grid_step > 0.0) || !(opts.window > 0.0) || !(opts.tolerance >= 0.0)) {
    throw DomainError("recovery options: grid_step, window must be > 0, tolerance >= 0");
  }
  RecoveryReport rep;
  rep.estimator_kind = estimator_for(loss);
  rep.target_value = analytic_target(dist, loss);
  rep.tolerance = opts.tolerance;
  rep.n_samples = n;
  rep.seed = seed;

  const auto xs = sample(dist, n, seed);
  const double median = sample_median(xs);
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(n);
  // Window around the sample median, widened to reach the sample mean for
  // skewed data; endpoints snapped to multiples of the step.
  const double half = std::max(opts.window, 1.5 * std::abs(mean - median));
  Grid grid;
  grid.step = opts.grid_step;
  grid.lo = std::floor((median - half) / grid.step) * grid.step;
  grid.hi = std::ceil((median + half) / grid.step) * grid.step;
  if (reg_loss_needs_positive(loss.kind)) grid.lo = std::max(grid.lo, grid.step);

  rep.recovered_value = brute_force_risk_minimizer(loss, xs, grid);
  rep.pass = std::abs(rep.recovered_value - rep.target_value) <= rep.tolerance;
  return rep;
}

RecoveryReport bce_probability_recovery(double p, std::size_t n, std::uint64_t seed,
                                        double grid_step, double tolerance) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("p must lie in [0, 1]");
  if (n == 0) throw DomainError("n must be >= 1");
  if (!(grid_step > 0.0 && grid_step < 0.5)) throw DomainError("grid_step must lie in (0, 0.5)");
  Xoshiro256pp rng(seed);
  std::size_t ones = 0;
  for (std::size_t i = 0; i < n; ++i) ones += rng.uniform() < p ? 1 : 0;
  const double frac = static_cast<double>(ones) / static_cast<double>(n);

  RecoveryReport rep;
  rep.estimator_kind = EstimatorKind::kProbability;
  rep.target_value = p;
  rep.tolerance = tolerance;
  rep.n_samples = n;
  rep.seed = seed;
  // Empirical BCE is frac * bce(1, q) + (1 - frac) * bce(0, q).
  const auto steps = static_cast<std::size_t>(std::floor(1.0 / grid_step + 1e-9));
  double best_risk = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < steps; ++k) {
    const double q = static_cast<double>(k) * grid_step;
    const double risk = -(frac * std::log(q) + (1.0 - frac) * std::log1p(-q));
    if (risk < best_risk) {
      best_risk = risk;
      rep.recovered_value = q;
    }
  }
  rep.pass = std::abs(rep.recovered_value - rep.target_value) <= tolerance;
  return rep;
}

std::vector<double> cce_risk_minimizer(std::span<const double> q, int resolution) {
  if (q.size() < 2) throw DomainError("cce_risk_minimizer: need >= 2 classes");
  if (resolution < 1) throw DomainError("cce_risk_minimizer: resolution must be >= 1");
  const std::size_t k = q.size();
  std::vector<int> counts(k, 0);
  std::vector<int> best_counts;
  double best_risk = std::numeric_limits<double>::infinity();
  const double res = resolution;

  // Enumerate compositions of `resolution` into k nonnegative parts.
  auto visit = [&](auto&& self, std::size_t pos, int remaining) -> void {
    if (pos + 1 == k) {
      counts[pos] = remaining;
      double risk = 0.0;
      for (std::size_t j = 0; j < k; ++j) {
        if (q[j] == 0.0) continue;
        if (counts[j] == 0) return;
        risk -= q[j] * std::log(counts[j] / res);
      }
      if (risk < best_risk) {
        best_risk = risk;
        best_counts = counts;
      }
      return;
    }
    for (int c = 0; c <= remaining; ++c) {
      counts[pos] = c;
      self(self, pos + 1, remaining - c);
    }
  };
  visit(visit, 0, resolution);

  std::vector<double> out(k);
  for (std::size_t j = 0; j < k; ++j) out[j] = best_counts[j] / res;
  return out;
}

std::vector<RobustnessRow> outlier_robustness_sweep(std::span<const RegLossSpec> losses,
                                                    double contamination, std::size_t n,
                                                    std::uint64_t seed,
                                                    const RobustnessOptions& opts) {
  if (!(contamination >= 0.0 && contamination < 0.5)) {
    throw DomainError("contamination must lie in [0, 0.5)");
  }
  const auto clean = sample(opts.noise, n, seed);
  auto dirty = clean;
  const auto n_out = static_cast<std::size_t>(std::llround(contamination * static_cast<double>(n)));
  for (std::size_t i = 0; i < n_out; ++i) dirty[i] = opts.outlier_value;

  auto covering_grid = [&](const std::vector<double>& xs) {
    const auto [mn, mx] = std::minmax_element(xs.begin(), xs.end());
    Grid g;
    g.step = opts.grid_step;
    g.lo = std::floor(*mn / g.step) * g.step;
    g.hi = std::ceil(*mx / g.step) * g.step;
    return g;
  };
  const Grid clean_grid = covering_grid(clean);
  const Grid dirty_grid = covering_grid(dirty);

  std::vector<RobustnessRow> rows;
  rows.reserve(losses.size());
  for (const auto& loss : losses) {
    RobustnessRow row;
    row.loss = loss;
    row.clean_minimizer = brute_force_risk_minimizer(loss, clean, clean_grid);
    row.contaminated_minimizer = brute_force_risk_minimizer(loss, dirty, dirty_grid);
    row.shift = std::abs(row.contaminated_minimizer - row.clean_minimizer);
    rows.push_back(row);
  }
  return rows;
}

Dataset synthetic_glm_dataset(const GlmFamily& family, const Matrix& true_weights,
                              std::size_t n, std::uint64_t seed, double feature_scale,
                              bool noiseless) {
  family.validate();
  if (n == 0) throw DomainError("synthetic_glm_dataset: n must be >= 1");
  if (true_weights.rows == 0) throw DomainError("synthetic_glm_dataset: empty weights");
  if (!(feature_scale > 0.0)) throw DomainError("feature_scale must be > 0");
  const bool multi = family.name == Family::kMultinomial;
  if (multi && noiseless) throw DomainError("noiseless multinomial data is not defined");
  if (!multi && true_weights.cols != 1) throw DomainError("scalar family needs one weight column");
  const std::size_t d = true_weights.rows - 1;

  Xoshiro256pp rng(seed);
  Dataset ds;
  ds.features = Matrix(n, d);
  ds.targets.resize(n);
  if (multi) ds.classes = true_weights.cols;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      ds.features(i, j) = feature_scale * (2.0 * rng.uniform() - 1.0);
    }
    const auto eta = linear_predictor(true_weights, ds.features.row(i));
    if (multi) {
      const auto probs = inverse_link(family, eta);
      const double u = rng.uniform();
      double acc = 0.0;
      std::size_t cls = probs.size() - 1;
      for (std::size_t k = 0; k < probs.size(); ++k) {
        acc += probs[k];
        if (u < acc) {
          cls = k;
          break;
        }
      }
      ds.targets[i] = static_cast<double>(cls);
      continue;
    }
    const double mu = inverse_link(family, eta[0]);
    if (noiseless) {
      ds.targets[i] = mu;
      continue;
    }
    switch (family.name) {
      case Family::kGaussian:
        ds.targets[i] = mu + std::sqrt(family.dispersion) * draw_normal(rng);
        break;
      case Family::kLaplace: {
        const double u = rng.uniform_open() - 0.5;
        ds.targets[i] = mu - family.dispersion * ((u > 0.0) - (u < 0.0)) *
                                 std::log1p(-2.0 * std::abs(u));
        break;
      }
      case Family::kBernoulli:
        ds.targets[i] = rng.uniform() < mu ? 1.0 : 0.0;
        break;
      case Family::kBernoulliBipolar:
        ds.targets[i] = rng.uniform() < 0.5 * (mu + 1.0) ? 1.0 : -1.0;
        break;
      case Family::kPoisson:
        ds.targets[i] = static_cast<double>(draw_poisson(rng, mu));
        break;
      case Family::kGamma: {
        const double shape = 1.0 / family.dispersion;
        ds.targets[i] = draw_gamma(rng, shape, shape / mu);
        break;
      }
      case Family::kTweedie: {
        const auto cpg = tweedie_compound(mu, family.tweedie_p, family.dispersion);
        const std::int64_t jumps = draw_poisson(rng, cpg.lambda);
        double total = 0.0;
        for (std::int64_t j = 0; j < jumps; ++j) total += draw_gamma(rng, cpg.shape, cpg.rate);
        ds.targets[i] = total;
        break;
      }
      case Family::kMultinomial:
        break;
    }
  }
  return ds;
}

}  // namespace llk
