#include "llk/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <future>
#include <limits>
#include <numbers>
#include <sstream>

#include "llk/activations.hpp"
#include "llk/bayes_lab.hpp"
#include "llk/divergences.hpp"
#include "llk/error.hpp"
#include "llk/glm.hpp"
#include "llk/losses_classification.hpp"
#include "llk/losses_regression.hpp"
#include "llk/numerics.hpp"
#include "llk/random.hpp"

namespace llk {
namespace {

constexpr std::string_view kSuites[] = {"canonical",  "divergences", "estimators",
                                        "gradcheck",  "identities",  "scoring"};

constexpr int kGridPoints = 50;
constexpr double kKinkMargin = 1e-3;

// Builds the check list of one suite.
class Recorder {
 public:
  explicit Recorder(std::string suite) { result_.name = std::move(suite); }

  void le(std::string name, double measured, double bound, std::string detail = {}) {
    add(std::move(name), measured, "<=", bound, measured <= bound, std::move(detail));
  }
  void lt(std::string name, double measured, double bound, std::string detail = {}) {
    add(std::move(name), measured, "<", bound, measured < bound, std::move(detail));
  }
  void ge(std::string name, double measured, double bound, std::string detail = {}) {
    add(std::move(name), measured, ">=", bound, measured >= bound, std::move(detail));
  }
  void gt(std::string name, double measured, double bound, std::string detail = {}) {
    add(std::move(name), measured, ">", bound, measured > bound, std::move(detail));
  }
  // Violation counts: passes when nothing was violated.
  void none(std::string name, std::size_t violations, std::string detail = {}) {
    le(std::move(name), static_cast<double>(violations), 0.0, std::move(detail));
  }

  // Runs `body`; an exception becomes a failed check instead of aborting the suite.
  void guard(const std::string& name, const std::function<void()>& body) {
    try {
      body();
    } catch (const std::exception& e) {
      add(name, std::numeric_limits<double>::quiet_NaN(), "<=", 0.0, false,
          std::string("exception: ") + e.what());
    }
  }

  SuiteResult finish() { return std::move(result_); }

 private:
  void add(std::string name, double measured, const char* cmp, double bound, bool pass,
           std::string detail) {
    CheckResult c;
    c.name = std::move(name);
    c.measured = measured;
    c.comparison = cmp;
    c.bound = bound;
    c.pass = pass && !std::isnan(measured);
    c.detail = std::move(detail);
    result_.checks.push_back(std::move(c));
  }

  SuiteResult result_;
};

std::string count_detail(std::size_t points, std::size_t failures) {
  std::ostringstream os;
  os << "points=" << points << " failures=" << failures;
  return os.str();
}

// Central-difference bookkeeping: worst |a - n| / (abs_tol + rel_tol |a|).
struct FdStats {
  std::size_t points = 0;
  std::size_t failures = 0;
  double worst = 0.0;

  void add(double analytic, double numeric, const FdConfig& cfg) {
    ++points;
    const double ratio =
        std::abs(analytic - numeric) / (cfg.abs_tol + cfg.rel_tol * std::abs(analytic));
    if (!cfg.accepts(analytic, numeric) || !std::isfinite(ratio)) ++failures;
    if (!(ratio <= worst)) worst = ratio;
  }
};

void record_fd(Recorder& rec, const std::string& name, const FdStats& s) {
  // The ratio is <= 1 exactly when the mixed tolerance holds at every point.
  rec.le(name, s.worst, 1.0, count_detail(s.points, s.failures));
  if (s.points < static_cast<std::size_t>(kGridPoints)) {
    rec.ge(name + "/points", static_cast<double>(s.points), kGridPoints);
  }
}

// Midpoint grid on [lo, hi] with points within kKinkMargin of a kink pushed
// to twice the margin away from it.
std::vector<double> grid_avoiding(double lo, double hi, int count,
                                  const std::vector<double>& kinks) {
  std::vector<double> pts;
  pts.reserve(count);
  for (int k = 0; k < count; ++k) {
    double z = lo + (hi - lo) * (k + 0.5) / count;
    for (double c : kinks) {
      if (std::abs(z - c) < kKinkMargin) z = z < c ? c - 2 * kKinkMargin : c + 2 * kKinkMargin;
    }
    pts.push_back(z);
  }
  return pts;
}

bool near_any(double z, const std::vector<double>& kinks) {
  return std::any_of(kinks.begin(), kinks.end(),
                     [z](double c) { return std::abs(z - c) < kKinkMargin; });
}

// Random probability vector from Dirichlet(1, ..., 1).
std::vector<double> random_distribution(Xoshiro256pp& rng, std::size_t k) {
  std::vector<double> p(k);
  double total = 0.0;
  for (double& v : p) {
    v = -std::log(rng.uniform_open());
    total += v;
  }
  for (double& v : p) v /= total;
  return p;
}

std::vector<double> random_normals(Xoshiro256pp& rng, std::size_t k, double scale) {
  std::vector<double> v(k);
  for (double& x : v) x = scale * draw_normal(rng);
  return v;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i) {
    m = std::max(m, std::abs(a.data[i] - b.data[i]));
  }
  return m;
}

// ---------------------------------------------------------------- gradcheck

void check_activations(Recorder& rec) {
  const FdConfig cfg;
  std::vector<std::pair<std::string, ActivationSpec>> specs;
  for (ActivationKind k : differentiable_activation_kinds()) {
    specs.emplace_back(std::string(activation_name(k)), ActivationSpec::defaults(k));
  }
  auto variant = [&](ActivationKind k, std::string label, auto tweak) {
    ActivationSpec s = ActivationSpec::defaults(k);
    tweak(s);
    specs.emplace_back(std::string(activation_name(k)) + "[" + label + "]", s);
  };
  variant(ActivationKind::kPrelu, "alpha=0.1", [](ActivationSpec& s) { s.alpha = 0.1; });
  variant(ActivationKind::kShiftedRelu, "alpha=2", [](ActivationSpec& s) { s.alpha = 2.0; });
  variant(ActivationKind::kElu, "alpha=0.5", [](ActivationSpec& s) { s.alpha = 0.5; });
  variant(ActivationKind::kSwish, "beta=10", [](ActivationSpec& s) { s.beta = 10.0; });
  variant(ActivationKind::kSquareplus, "b=0", [](ActivationSpec& s) { s.b = 0.0; });
  variant(ActivationKind::kSquareplus, "b=4", [](ActivationSpec& s) { s.b = 4.0; });

  for (const auto& [label, spec] : specs) {
    rec.guard("activation/" + label, [&, &label = label, &spec = spec] {
      FdStats st;
      for (double z : grid_avoiding(-6.0, 6.0, kGridPoints, activation_kinks(spec))) {
        const double num = central_difference([&](double t) { return act_value(spec, t); }, z, cfg);
        st.add(act_deriv(spec, z), num, cfg);
      }
      record_fd(rec, "activation/" + label, st);
    });
  }

  rec.guard("activation/crelu", [&] {
    FdStats st;
    for (double z : grid_avoiding(-6.0, 6.0, kGridPoints, {0.0})) {
      const auto d = crelu_deriv(z);
      for (int j = 0; j < 2; ++j) {
        const double num = central_difference([&](double t) { return crelu(t)[j]; }, z, cfg);
        st.add(d[j], num, cfg);
      }
    }
    record_fd(rec, "activation/crelu", st);
  });
}

void check_regression_losses(Recorder& rec) {
  const FdConfig cfg;
  for (RegLossKind kind : all_reg_loss_kinds()) {
    const RegLossSpec spec = RegLossSpec::of(kind);
    const std::string name = "regression/" + std::string(reg_loss_name(kind));
    rec.guard(name, [&] {
      FdStats st;
      if (reg_loss_needs_positive(kind)) {
        const bool zero_ok = kind != RegLossKind::kGammaDeviance;
        for (int k = 0; k < kGridPoints; ++k) {
          double y = 0.1 + 4.9 * std::fmod(0.618033988749895 * k, 1.0);
          if (zero_ok && k % 10 == 0) y = 0.0;
          const double yhat = 0.2 + 4.8 * (k + 0.5) / kGridPoints;
          const double num =
              central_difference([&](double t) { return reg_loss(spec, y, t); }, yhat, cfg);
          st.add(reg_loss_grad(spec, y, yhat), num, cfg);
        }
      } else {
        const auto kinks = reg_loss_kinks(spec);
        const auto residuals = grid_avoiding(-4.0, 4.0, kGridPoints, kinks);
        for (int k = 0; k < kGridPoints; ++k) {
          const double y = 1.5 * std::sin(0.7 * k);
          const double yhat = y - residuals[k];
          // Rounding in y - r can land a nudged residual back near a kink.
          if (near_any(y - yhat, kinks)) continue;
          const double num =
              central_difference([&](double t) { return reg_loss(spec, y, t); }, yhat, cfg);
          st.add(reg_loss_grad(spec, y, yhat), num, cfg);
        }
      }
      record_fd(rec, name, st);
    });
  }
}

// FD of a vector-input loss with respect to each coordinate.
void fd_vector(FdStats& st, const std::function<double(std::span<const double>)>& f,
               std::vector<double> x, const std::vector<double>& grad, const FdConfig& cfg) {
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double x0 = x[j];
    const double num = central_difference(
        [&](double t) {
          x[j] = t;
          const double v = f(x);
          x[j] = x0;
          return v;
        },
        x0, cfg);
    st.add(grad[j], num, cfg);
  }
}

void check_classification_losses(Recorder& rec, std::uint64_t seed) {
  const FdConfig cfg;
  Xoshiro256pp rng(seed ^ 0x636c617373ULL);

  rec.guard("classification/bce", [&] {
    FdStats st;
    for (int k = 0; k < kGridPoints; ++k) {
      const double y = k % 2;
      const double p = 0.02 + 0.96 * (k + 0.5) / kGridPoints;
      st.add(bce_grad(y, p), central_difference([&](double t) { return bce(y, t); }, p, cfg),
             cfg);
    }
    record_fd(rec, "classification/bce", st);
  });

  rec.guard("classification/bce_from_logits", [&] {
    FdStats st;
    for (int k = 0; k < kGridPoints; ++k) {
      const double y = k % 3 == 2 ? 0.3 : k % 2;
      const double z = -6.0 + 12.0 * (k + 0.5) / kGridPoints;
      st.add(bce_from_logits_grad(y, z),
             central_difference([&](double t) { return bce_from_logits(y, t); }, z, cfg), cfg);
    }
    record_fd(rec, "classification/bce_from_logits", st);
  });

  rec.guard("classification/bipolar_bce", [&] {
    FdStats st;
    for (int k = 0; k < kGridPoints; ++k) {
      const double y = k % 2 ? 1.0 : -1.0;
      const double yhat = -0.96 + 1.92 * (k + 0.5) / kGridPoints;
      st.add(bipolar_bce_grad(y, yhat),
             central_difference([&](double t) { return bipolar_bce(y, t); }, yhat, cfg), cfg);
    }
    record_fd(rec, "classification/bipolar_bce", st);
  });

  auto random_target = [&](std::size_t k) {
    return OneHot{static_cast<std::size_t>(rng() % k), k};
  };
  // Probability vector with every entry >= floor so FD steps stay inside (0, 1).
  auto random_probs = [&](std::size_t k, double floor) {
    auto p = random_distribution(rng, k);
    for (double& v : p) v = floor + (1.0 - k * floor) * v;
    return p;
  };

  rec.guard("classification/cce", [&] {
    FdStats st;
    for (int i = 0; i < kGridPoints; ++i) {
      const std::size_t k = 2 + i % 4;
      const OneHot t = random_target(k);
      const auto p = random_probs(k, 0.02);
      fd_vector(st, [&](std::span<const double> x) { return cce(t, x); }, p, cce_grad(t, p), cfg);
    }
    record_fd(rec, "classification/cce", st);
  });

  rec.guard("classification/cce_from_logits", [&] {
    FdStats st;
    for (int i = 0; i < kGridPoints; ++i) {
      const std::size_t k = 2 + i % 4;
      const OneHot t = random_target(k);
      const auto z = random_normals(rng, k, 2.0);
      fd_vector(st, [&](std::span<const double> x) { return cce_from_logits(t, x); }, z,
                cce_from_logits_grad(t, z), cfg);
    }
    record_fd(rec, "classification/cce_from_logits", st);
  });

  rec.guard("classification/focal", [&] {
    constexpr double gammas[] = {0.0, 0.5, 1.0, 2.0, 3.0};
    FdStats st;
    for (int i = 0; i < kGridPoints; ++i) {
      const std::size_t k = 2 + i % 4;
      const OneHot t = random_target(k);
      const auto p = random_probs(k, 0.02);
      const double g = gammas[i % 5];
      fd_vector(st, [&](std::span<const double> x) { return focal(t, x, g); }, p,
                focal_grad(t, p, g), cfg);
    }
    record_fd(rec, "classification/focal", st);
  });

  for (HingeKind kind : {HingeKind::kBinary, HingeKind::kSquared}) {
    const std::string name = "classification/hinge_" + std::string(hinge_name(kind));
    rec.guard(name, [&] {
      FdStats st;
      for (int k = 0; k < kGridPoints; ++k) {
        const double y = k % 2 ? 1.0 : -1.0;
        // The margin y s hits 1 at s = y.
        const double s = grid_avoiding(-3.0, 3.0, kGridPoints, {y})[k];
        st.add(hinge_grad(kind, y, s),
               central_difference([&](double t) { return hinge(kind, y, t); }, s, cfg), cfg);
      }
      record_fd(rec, name, st);
    });
  }

  for (HingeKind kind : {HingeKind::kCrammerSinger, HingeKind::kWestonWatkins}) {
    const std::string name = "classification/hinge_" + std::string(hinge_name(kind));
    rec.guard(name, [&] {
      FdStats st;
      int accepted = 0;
      while (accepted < kGridPoints) {
        const std::size_t k = 3 + accepted % 3;
        const OneHot t = random_target(k);
        const auto s = random_normals(rng, k, 1.5);
        // Reject score vectors near a margin kink or a runner-up tie.
        std::vector<double> margins;
        for (std::size_t j = 0; j < k; ++j) {
          if (j != t.index) margins.push_back(1.0 + s[j] - s[t.index]);
        }
        std::sort(margins.begin(), margins.end());
        bool near = false;
        for (std::size_t j = 0; j < margins.size(); ++j) {
          if (std::abs(margins[j]) < 2 * kKinkMargin) near = true;
          if (j > 0 && margins[j] - margins[j - 1] < 2 * kKinkMargin) near = true;
        }
        if (near) continue;
        ++accepted;
        fd_vector(st, [&](std::span<const double> x) { return hinge(kind, t, x); }, s,
                  hinge_grad(kind, t, s), cfg);
      }
      record_fd(rec, name, st);
    });
  }
}

// --------------------------------------------------------------- identities

// Max of |f(z)| over a symmetric grid.
double max_over_grid(double lo, double hi, int n, const std::function<double(double)>& f) {
  double m = 0.0;
  for (int k = 0; k < n; ++k) {
    const double z = lo + (hi - lo) * k / (n - 1);
    const double v = std::abs(f(z));
    if (!(v <= m)) m = v;
  }
  return m;
}

void check_identities(Recorder& rec, std::uint64_t seed) {
  Xoshiro256pp rng(seed ^ 0x6964656e74ULL);
  const auto spec = [](ActivationKind k) { return ActivationSpec::defaults(k); };
  const auto logistic_s = spec(ActivationKind::kLogistic);
  const auto tanh_s = spec(ActivationKind::kTanh);

  rec.le("tanh_from_logistic",
         max_over_grid(-20, 20, 401,
                       [&](double z) {
                         return act_value(tanh_s, z) - (2 * act_value(logistic_s, 2 * z) - 1);
                       }),
         1e-10, "max |tanh(z) - (2 logistic(2z) - 1)| on [-20, 20]");
  rec.le("logistic_from_tanh",
         max_over_grid(-20, 20, 401,
                       [&](double z) {
                         return act_value(logistic_s, z) - (act_value(tanh_s, z / 2) + 1) / 2;
                       }),
         1e-10, "max |logistic(z) - (tanh(z/2) + 1)/2| on [-20, 20]");
  rec.le("softplus_derivative_is_logistic",
         max_over_grid(-20, 20, 401,
                       [&](double z) {
                         return act_deriv(spec(ActivationKind::kSoftplus), z) - logistic(z);
                       }),
         1e-10, "max |softplus'(z) - logistic(z)|");

  double shift_err = 0.0;
  double row_sum_err = 0.0;
  for (int i = 0; i < 200; ++i) {
    const std::size_t k = 2 + i % 9;
    auto x = random_normals(rng, k, 3.0);
    const double c = 50.0 * (rng.uniform() - 0.5);
    auto shifted = x;
    for (double& v : shifted) v += c;
    const auto a = softmax(x);
    const auto b = softmax(shifted);
    for (std::size_t j = 0; j < k; ++j) shift_err = std::max(shift_err, std::abs(a[j] - b[j]));
    const auto jac = softmax_jacobian(x);
    for (std::size_t r = 0; r < k; ++r) {
      double s = 0.0;
      for (std::size_t j = 0; j < k; ++j) s += jac[r * k + j];
      row_sum_err = std::max(row_sum_err, std::abs(s));
    }
  }
  rec.le("softmax_shift_invariance", shift_err, 1e-10, "200 random vectors, shifts in [-25, 25]");
  rec.le("softmax_jacobian_row_sums", row_sum_err, 1e-10, "max |sum_j J_ij|");

  double ce_err = 0.0;
  for (int i = 0; i < 200; ++i) {
    const std::size_t k = 2 + i % 9;
    const auto p = random_distribution(rng, k);
    const auto q = random_distribution(rng, k);
    const double lhs = divergence(DivergenceKind::kCrossEntropy, p, q);
    const double rhs = entropy(p) + divergence(DivergenceKind::kKl, p, q);
    ce_err = std::max(ce_err, std::abs(lhs - rhs));
  }
  rec.le("cross_entropy_decomposition", ce_err, 1e-12, "max |H(p,q) - H(p) - KL(p||q)|");

  double bip_err = 0.0;
  for (int t = 0; t <= 1; ++t) {
    for (int k = 1; k < 1000; ++k) {
      const double p = k / 1000.0;
      bip_err = std::max(bip_err, std::abs(bipolar_bce(2.0 * t - 1, 2 * p - 1) - bce(t, p)));
    }
  }
  rec.le("bipolar_bce_matches_bce", bip_err, 1e-12, "t in {0,1}, p = 0.001..0.999");

  RegLossSpec pin = RegLossSpec::of(RegLossKind::kPinball);
  pin.tau = 0.5;
  const RegLossSpec mae = RegLossSpec::of(RegLossKind::kMae);
  rec.le("pinball_half_is_half_mae",
         max_over_grid(-10, 10, 401,
                       [&](double r) { return reg_loss(pin, r, 0.0) - reg_loss(mae, r, 0.0) / 2; }),
         1e-10);

  ActivationSpec sq0 = spec(ActivationKind::kSquareplus);
  sq0.b = 0.0;
  rec.le("squareplus_b0_is_relu",
         max_over_grid(-10, 10, 401,
                       [&](double z) {
                         return act_value(sq0, z) - act_value(spec(ActivationKind::kRelu), z);
                       }),
         1e-10);

  // Numerics.
  {
    double lse_err = 0.0;
    for (int i = 0; i < 100; ++i) {
      auto x = random_normals(rng, 1 + i % 10, 10.0);
      const double c = 100.0 * (rng.uniform() - 0.5);
      auto y = x;
      for (double& v : y) v += c;
      lse_err = std::max(lse_err, std::abs(log_sum_exp(y) - (log_sum_exp(x) + c)));
    }
    rec.le("log_sum_exp_shift", lse_err, 1e-12);
    rec.le("softplus_odd_part",
           max_over_grid(-30, 30, 601,
                         [](double z) { return stable_softplus(z) - stable_softplus(-z) - z; }),
           1e-10, "softplus(z) - softplus(-z) = z");
    double lg = 0.0;
    for (double x : {1.0, 2.5, 10.0, 1e4}) {
      lg = std::max(lg, std::abs(log_gamma(x + 1) - log_gamma(x) - std::log(x)));
    }
    rec.le("log_gamma_recurrence", lg, 1e-9, "x in {1, 2.5, 10, 1e4}");
  }

  // Activations.
  {
    ActivationSpec sw = spec(ActivationKind::kSwish);
    sw.beta = 1e3;
    double sw_err = 0.0;
    for (int k = 0; k <= 400; ++k) {
      const double z = -10.0 + 0.05 * k;
      if (std::abs(z) < 0.1 - 1e-12) continue;
      sw_err = std::max(sw_err, std::abs(act_value(sw, z) - std::max(z, 0.0)));
    }
    rec.le("swish_large_beta_is_relu", sw_err, 1e-3, "beta = 1e3, |z| >= 0.1");

    ActivationSpec sq = spec(ActivationKind::kSquareplus);
    double below = 0.0;
    for (double b : {0.01, 1.0, 4.0}) {
      sq.b = b;
      for (int k = 0; k <= 200; ++k) {
        const double z = -10.0 + 0.1 * k;
        below = std::max(below, std::max(z, 0.0) - act_value(sq, z));
      }
    }
    rec.le("squareplus_dominates_relu", below, 0.0, "max(relu - squareplus) for b > 0");

    const auto gelu = spec(ActivationKind::kGelu);
    rec.le("gelu_is_z_phi",
           max_over_grid(-8, 8, 161,
                         [&](double z) { return act_value(gelu, z) - z * normal_cdf(z); }),
           1e-12);
    rec.le("gelu_large_z", std::abs(act_value(gelu, 40.0) - 40.0), 1e-12);

    const auto delu = spec(ActivationKind::kDelu);
    const double xc = delu.x_c;
    rec.le("delu_continuity",
           std::abs(act_value(delu, xc - 1e-12) - act_value(delu, xc + 1e-12)), 1e-4);

    std::size_t mono = 0;
    for (ActivationKind k : {ActivationKind::kSoftsign, ActivationKind::kArctan}) {
      const auto s = spec(k);
      double prev = -std::numeric_limits<double>::infinity();
      const double bound = k == ActivationKind::kSoftsign ? 1.0 : std::numbers::pi / 2;
      for (int i = 0; i <= 400; ++i) {
        const double v = act_value(s, -50.0 + 0.25 * i);
        if (!(v > prev) || std::abs(v) >= bound) ++mono;
        prev = v;
      }
    }
    rec.none("softsign_arctan_increasing_bounded", mono);
  }

  // Regression losses.
  {
    RegLossSpec hub = RegLossSpec::of(RegLossKind::kHuber);
    double hub_err = 0.0;
    for (double delta : {0.5, 1.0, 2.0}) {
      hub.delta = delta;
      for (double sgn : {-1.0, 1.0}) {
        const double r = sgn * delta;
        const double quad = 0.5 * r * r;
        const double lin = delta * (std::abs(r) - 0.5 * delta);
        hub_err = std::max(hub_err, std::abs(reg_loss(hub, r, 0.0) - quad));
        hub_err = std::max(hub_err, std::abs(quad - lin));
        // d/dyhat at r = +-delta from both branches is -r.
        hub_err = std::max(hub_err, std::abs(reg_loss_grad(hub, r, 0.0) + r));
      }
    }
    rec.le("huber_continuity", hub_err, 1e-12);

    RegLossSpec tk = RegLossSpec::of(RegLossKind::kTukey);
    double tk_excess = 0.0;
    for (double c : {1.0, 4.685}) {
      tk.c = c;
      for (int i = -50; i <= 50; ++i) {
        const double e = 0.05 * c * i / 50.0;
        const double approx = e * e / 2 - std::pow(e, 4) / (2 * c * c);
        tk_excess = std::max(tk_excess, std::abs(reg_loss(tk, e, 0.0) - approx) / (c * c));
      }
    }
    rec.le("tukey_small_residual", tk_excess, 2e-6, "max |tukey - approx| / c^2, |r| <= 0.05 c");

    RegLossSpec eps0 = RegLossSpec::of(RegLossKind::kEpsInsensitive);
    eps0.eps = 0.0;
    rec.le("eps_insensitive_zero_is_mae",
           max_over_grid(-10, 10, 401,
                         [&](double r) { return reg_loss(eps0, r, 0.0) - reg_loss(mae, r, 0.0); }),
           1e-12);

    const RegLossSpec he = RegLossSpec::of(RegLossKind::kHuberizedEps);
    double he_jump = 0.0;
    for (double r0 : {he.eps, he.eps + he.delta}) {
      for (double sgn : {-1.0, 1.0}) {
        const double r = sgn * r0;
        he_jump = std::max(he_jump,
                           std::abs(reg_loss(he, r + 1e-9, 0.0) - reg_loss(he, r - 1e-9, 0.0)));
      }
    }
    rec.le("huberized_eps_continuity", he_jump, 1e-8);

    const RegLossSpec lc = RegLossSpec::of(RegLossKind::kLogCosh);
    const RegLossSpec mse = RegLossSpec::of(RegLossKind::kMse);
    double lc_over = 0.0;
    for (int i = 0; i <= 400; ++i) {
      const double r = -20.0 + 0.1 * i;
      lc_over = std::max(lc_over, reg_loss(lc, r, 0.0) - reg_loss(mse, r, 0.0) / 2);
    }
    rec.le("log_cosh_below_half_mse", lc_over, 0.0);
    rec.le("log_cosh_linear_tail",
           std::abs(reg_loss(lc, 40.0, 0.0) - (40.0 - std::numbers::ln2)), 1e-12);

    const RegLossSpec gd = RegLossSpec::of(RegLossKind::kGammaDeviance);
    std::size_t gd_bad = 0;
    for (int i = 1; i <= 50; ++i) {
      const double y = 0.1 * i;
      if (reg_loss(gd, y, y) != 0.0 && std::abs(reg_loss(gd, y, y)) > 1e-15) ++gd_bad;
      if (!(reg_loss(gd, y, 1.1 * y) > 0.0) || !(reg_loss(gd, y, 0.9 * y) > 0.0)) ++gd_bad;
      if (!(reg_loss(gd, y, y / 2) > reg_loss(gd, y, 2 * y))) ++gd_bad;
    }
    rec.none("gamma_deviance_nonnegative_asymmetric", gd_bad);

    // Empirical minimizers over a finite sample.
    std::vector<double> xs = random_normals(rng, 201, 1.0);
    for (double& v : xs) v = std::exp(v);  // skewed so mean, median, quantile differ
    std::vector<double> sorted = xs;
    std::sort(sorted.begin(), sorted.end());
    double mean = 0.0;
    for (double v : xs) mean += v;
    mean /= xs.size();
    const Grid g{0.0, std::ceil(sorted.back()), 0.001};
    const double m_mse = brute_force_risk_minimizer(mse, xs, g);
    const double m_mae = brute_force_risk_minimizer(mae, xs, g);
    RegLossSpec q = RegLossSpec::of(RegLossKind::kPinball);
    q.tau = 0.8;
    const double m_q = brute_force_risk_minimizer(q, xs, g);
    rec.le("empirical_mse_minimizer_is_mean", std::abs(m_mse - mean), g.step);
    rec.le("empirical_mae_minimizer_is_median", std::abs(m_mae - sorted[100]), g.step);
    // With n = 201 the 0.8-quantile minimizer is the 161st order statistic.
    rec.le("empirical_pinball_minimizer_is_quantile", std::abs(m_q - sorted[160]), g.step);
  }

  // Classification.
  {
    rec.le("bce_from_logits_grad_identity",
           max_over_grid(-30, 30, 601,
                         [](double z) {
                           return std::max(std::abs(bce_from_logits_grad(1.0, z) - (logistic(z) - 1)),
                                           std::abs(bce_from_logits_grad(0.0, z) - logistic(z)));
                         }),
           1e-12);
    // Focal down-weights confident examples: ratio to CCE is (1 - p_t)^gamma.
    const OneHot t{0, 2};
    const std::vector<double> p = {0.999, 0.001};
    rec.le("focal_downweights_easy_examples", focal(t, p, 2.0) / cce(t, p), 1.0000001e-6);
  }

  // GLM links.
  {
    double rt = 0.0;
    for (Family f : {Family::kGaussian, Family::kLaplace, Family::kBernoulli,
                     Family::kBernoulliBipolar, Family::kPoisson, Family::kGamma,
                     Family::kTweedie}) {
      const GlmFamily fam = GlmFamily::of(f);
      for (int k = 0; k < 200; ++k) {
        double mu = 0.0;
        switch (f) {
          case Family::kBernoulli: mu = 0.001 + 0.998 * k / 199.0; break;
          case Family::kBernoulliBipolar: mu = -0.998 + 1.996 * k / 199.0; break;
          case Family::kPoisson:
          case Family::kGamma:
          case Family::kTweedie: mu = 0.01 + 0.5 * k; break;
          default: mu = -50.0 + 0.5 * k; break;
        }
        rt = std::max(rt, std::abs(inverse_link(fam, link(fam, mu)) - mu) / std::max(1.0, std::abs(mu)));
      }
    }
    const GlmFamily multi = GlmFamily::of(Family::kMultinomial);
    for (int i = 0; i < 100; ++i) {
      const auto p = random_distribution(rng, 2 + i % 6);
      const auto back = inverse_link(multi, link(multi, p));
      for (std::size_t j = 0; j < p.size(); ++j) rt = std::max(rt, std::abs(back[j] - p[j]));
    }
    rec.le("link_inverse_round_trip", rt, 1e-10, "relative for |mu| > 1");
  }
}

// ---------------------------------------------------------------- canonical

Dataset random_dataset(Xoshiro256pp& rng, Family f, std::size_t n, std::size_t d,
                       std::size_t classes) {
  Dataset ds;
  ds.features = Matrix(n, d);
  for (double& v : ds.features.data) v = draw_normal(rng);
  ds.targets.resize(n);
  ds.classes = f == Family::kMultinomial ? classes : 0;
  for (double& t : ds.targets) {
    switch (f) {
      case Family::kBernoulli: t = rng.uniform() < 0.5 ? 0.0 : 1.0; break;
      case Family::kBernoulliBipolar: t = rng.uniform() < 0.5 ? -1.0 : 1.0; break;
      case Family::kMultinomial: t = static_cast<double>(rng() % classes); break;
      case Family::kPoisson: t = static_cast<double>(draw_poisson(rng, 2.0)); break;
      case Family::kGamma: t = draw_gamma(rng, 2.0, 1.0); break;
      case Family::kTweedie: t = rng.uniform() < 0.3 ? 0.0 : draw_gamma(rng, 2.0, 1.0); break;
      default: t = draw_normal(rng); break;
    }
  }
  return ds;
}

Matrix random_weights(Xoshiro256pp& rng, std::size_t rows, std::size_t cols, double scale) {
  Matrix w(rows, cols);
  for (double& v : w.data) v = scale * draw_normal(rng);
  return w;
}

Dataset single_row(const Dataset& ds, std::size_t i) {
  Dataset one;
  one.features = Matrix(1, ds.num_features());
  const auto r = ds.features.row(i);
  std::copy(r.begin(), r.end(), one.features.data.begin());
  one.targets = {ds.targets[i]};
  one.classes = ds.classes;
  return one;
}

void check_canonical(Recorder& rec, std::uint64_t seed) {
  Xoshiro256pp rng(seed ^ 0x63616e6fULL);
  constexpr std::size_t n = 64, d = 5, classes = 3;

  for (Family f : {Family::kGaussian, Family::kBernoulli, Family::kMultinomial,
                   Family::kBernoulliBipolar, Family::kPoisson}) {
    const GlmFamily fam = GlmFamily::of(f);
    const std::string name = "chain_rule_reduction/" + std::string(family_name(f));
    rec.guard(name, [&] {
      const Dataset ds = random_dataset(rng, f, n, d, classes);
      const Matrix w = random_weights(rng, d + 1, weight_columns(fam, ds), 0.3);
      double worst = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const Dataset one = single_row(ds, i);
        const Matrix g = nll_grad_chain_rule(fam, one, w);
        const auto x = ds.features.row(i);
        const auto mu = predict(fam, w, x);
        std::vector<double> resid(mu.size());
        if (f == Family::kMultinomial) {
          for (std::size_t k = 0; k < classes; ++k) {
            resid[k] = mu[k] - (static_cast<std::size_t>(ds.targets[i]) == k ? 1.0 : 0.0);
          }
        } else if (f == Family::kBernoulliBipolar) {
          // Bipolar BCE against tanh(eta/2) reduces to (mu - y)/2.
          resid[0] = (mu[0] - ds.targets[i]) / 2;
        } else {
          resid[0] = mu[0] - ds.targets[i];
        }
        for (std::size_t r = 0; r <= d; ++r) {
          const double xr = r < d ? x[r] : 1.0;
          for (std::size_t k = 0; k < resid.size(); ++k) {
            worst = std::max(worst, std::abs(g(r, k) - resid[k] * xr));
          }
        }
      }
      rec.le(name, worst, 1e-12, "64 x 5 dataset, per example");
    });
  }

  for (Family f : {Family::kGaussian, Family::kBernoulli, Family::kMultinomial,
                   Family::kBernoulliBipolar, Family::kPoisson}) {
    const GlmFamily fam = GlmFamily::of(f);
    const std::string name = "closed_form_matches_chain_rule/" + std::string(family_name(f));
    rec.guard(name, [&] {
      const Dataset ds = random_dataset(rng, f, n, d, classes);
      const Matrix w = random_weights(rng, d + 1, weight_columns(fam, ds), 0.3);
      rec.le(name, max_abs_diff(nll_grad(fam, ds, w), nll_grad_chain_rule(fam, ds, w)), 1e-12);
    });
  }

  const FdConfig cfg;
  for (Family f : {Family::kGaussian, Family::kLaplace, Family::kBernoulli,
                   Family::kBernoulliBipolar, Family::kMultinomial, Family::kPoisson,
                   Family::kGamma, Family::kTweedie}) {
    GlmFamily fam = GlmFamily::of(f);
    if (f == Family::kGaussian || f == Family::kGamma) fam.dispersion = 1.7;
    const std::string name = "nll_grad_fd/" + std::string(family_name(f));
    rec.guard(name, [&] {
      const Dataset ds = random_dataset(rng, f, n, d, classes);
      Matrix w = random_weights(rng, d + 1, weight_columns(fam, ds), 0.3);
      const Matrix g = nll_grad(fam, ds, w);
      FdStats st;
      for (std::size_t j = 0; j < w.data.size(); ++j) {
        const double w0 = w.data[j];
        const double num = central_difference(
            [&](double t) {
              w.data[j] = t;
              const double v = nll(fam, ds, w);
              w.data[j] = w0;
              return v;
            },
            w0, cfg);
        st.add(g.data[j], num, cfg);
      }
      rec.le(name, st.worst, 1.0, count_detail(st.points, st.failures));
    });
  }

  rec.guard("bipolar_equivalence", [&] {
    Dataset bern = random_dataset(rng, Family::kBernoulli, 200, 2, 0);
    // Labels from a noisy linear rule keep the classes overlapping.
    for (std::size_t i = 0; i < bern.size(); ++i) {
      const double eta = 0.8 * bern.features(i, 0) - 0.5 * bern.features(i, 1) + 0.2;
      bern.targets[i] = rng.uniform() < logistic(eta) ? 1.0 : 0.0;
    }
    Dataset bip = bern;
    for (double& t : bip.targets) t = 2 * t - 1;
    FitConfig cfg_fit;
    cfg_fit.learning_rate = 1.0;
    cfg_fit.grad_tol = 1e-11;
    const FitReport a = fit(GlmFamily::of(Family::kBernoulli), bern, cfg_fit);
    const FitReport b = fit(GlmFamily::of(Family::kBernoulliBipolar), bip, cfg_fit);
    rec.le("bipolar_equivalence", max_abs_diff(a.weights, b.weights), 1e-8,
           "max |w_bernoulli - w_bipolar|");
  });
}

// --------------------------------------------------------------- estimators

// Solves the SPD system A x = b by Cholesky; A is row-major m x m.
std::vector<double> cholesky_solve(std::vector<double> a, std::vector<double> b, std::size_t m) {
  for (std::size_t j = 0; j < m; ++j) {
    double s = a[j * m + j];
    for (std::size_t k = 0; k < j; ++k) s -= a[j * m + k] * a[j * m + k];
    if (!(s > 0.0)) throw DomainError("normal equations are not positive definite");
    const double l = std::sqrt(s);
    a[j * m + j] = l;
    for (std::size_t i = j + 1; i < m; ++i) {
      double t = a[i * m + j];
      for (std::size_t k = 0; k < j; ++k) t -= a[i * m + k] * a[j * m + k];
      a[i * m + j] = t / l;
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t k = 0; k < i; ++k) b[i] -= a[i * m + k] * b[k];
    b[i] /= a[i * m + i];
  }
  for (std::size_t i = m; i-- > 0;) {
    for (std::size_t k = i + 1; k < m; ++k) b[i] -= a[k * m + i] * b[k];
    b[i] /= a[i * m + i];
  }
  return b;
}

std::vector<double> normal_equations(const Dataset& ds) {
  const std::size_t m = ds.num_features() + 1;
  std::vector<double> ata(m * m, 0.0), aty(m, 0.0);
  std::vector<double> row(m);
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const auto x = ds.features.row(i);
    std::copy(x.begin(), x.end(), row.begin());
    row[m - 1] = 1.0;
    for (std::size_t r = 0; r < m; ++r) {
      aty[r] += row[r] * ds.targets[i];
      for (std::size_t c = 0; c < m; ++c) ata[r * m + c] += row[r] * row[c];
    }
  }
  return cholesky_solve(std::move(ata), std::move(aty), m);
}

std::size_t nll_increases(const FitReport& r) {
  std::size_t bad = 0;
  for (std::size_t i = 1; i < r.nll_history.size(); ++i) {
    if (r.nll_history[i] > r.nll_history[i - 1]) ++bad;
  }
  return bad;
}

void check_estimators(Recorder& rec, std::uint64_t seed) {
  constexpr std::size_t n_rec = 200000;
  constexpr double center = 2.5;
  struct Case {
    const char* label;
    NoiseDist dist;
    RegLossKind loss;
    std::map<std::string, double, std::less<>> params;
  };
  const Case cases[] = {
      {"gaussian_mse_mean", NoiseDist::kGaussian, RegLossKind::kMse, {{"mu", center}}},
      {"laplace_mae_median", NoiseDist::kLaplace, RegLossKind::kMae, {{"mu", center}}},
      {"double_pareto_log_mode", NoiseDist::kDoublePareto, RegLossKind::kLogPareto,
       {{"mu", center}, {"alpha", 1.5}}},
  };
  for (const Case& c : cases) {
    const std::string name = std::string("recovery/") + c.label;
    rec.guard(name, [&] {
      const NoiseSpec ns{c.dist, c.params};
      const RecoveryReport r = estimator_recovery(ns, RegLossSpec::of(c.loss), n_rec, seed);
      std::ostringstream os;
      os << "target=" << r.target_value << " recovered=" << r.recovered_value
         << " n=" << r.n_samples;
      rec.le(name, std::abs(r.recovered_value - r.target_value), r.tolerance, os.str());
    });
  }

  rec.guard("glm/gaussian_normal_equations", [&] {
    Matrix w(4, 1);
    w.data = {1.5, -2.0, 0.7, 0.3};
    const Dataset ds =
        synthetic_glm_dataset(GlmFamily::of(Family::kGaussian), w, 200, seed ^ 0x6e6fULL, 1.0, true);
    FitConfig cfg;
    cfg.learning_rate = 1.0;
    cfg.grad_tol = 1e-10;
    const FitReport r = fit(GlmFamily::of(Family::kGaussian), ds, cfg);
    const auto ne = normal_equations(ds);
    double diff = 0.0;
    for (std::size_t i = 0; i < ne.size(); ++i) diff = std::max(diff, std::abs(r.weights.data[i] - ne[i]));
    rec.le("glm/gaussian_normal_equations", diff, 1e-6, "max |w_gd - w_normal_equations|");
    rec.none("glm/gaussian_nll_monotone", nll_increases(r),
             "iterations=" + std::to_string(r.iterations));
  });

  rec.guard("glm/poisson_recovery", [&] {
    // True (intercept, w1, w2) = (0.5, -0.3, 0.2); the intercept is stored last.
    Matrix w(3, 1);
    w.data = {-0.3, 0.2, 0.5};
    const Dataset ds =
        synthetic_glm_dataset(GlmFamily::of(Family::kPoisson), w, 50000, seed, 4.0);
    FitConfig cfg;
    cfg.grad_tol = 1e-6;
    const FitReport r = fit(GlmFamily::of(Family::kPoisson), ds, cfg);
    const char* labels[] = {"w1", "w2", "intercept"};
    for (std::size_t i = 0; i < 3; ++i) {
      std::ostringstream os;
      os << "true=" << w.data[i] << " fitted=" << r.weights.data[i];
      rec.le(std::string("glm/poisson_recovery/") + labels[i],
             std::abs(r.weights.data[i] - w.data[i]) / std::abs(w.data[i]), 0.02, os.str());
    }
    rec.none("glm/poisson_nll_monotone", nll_increases(r),
             "iterations=" + std::to_string(r.iterations));
  });

  rec.guard("robustness", [&] {
    const RegLossSpec losses[] = {RegLossSpec::of(RegLossKind::kMse),
                                  RegLossSpec::of(RegLossKind::kMae),
                                  RegLossSpec::of(RegLossKind::kLogPareto)};
    const auto rows = outlier_robustness_sweep(losses, 0.1, 2000, seed);
    const double s_mse = rows[0].shift, s_mae = rows[1].shift, s_log = rows[2].shift;
    std::ostringstream os;
    os << "mse=" << s_mse << " mae=" << s_mae << " log_pareto=" << s_log;
    rec.gt("robustness/mse_exceeds_log_pareto", s_mse - s_log, 0.0, os.str());
    rec.ge("robustness/mae_within_mse", s_mse - s_mae, 0.0, os.str());
  });

  // Sampler moments.
  constexpr std::size_t n_mc = 1000000;
  rec.guard("sampler/gamma", [&] {
    const NoiseSpec g{NoiseDist::kGamma, {{"shape", 2.5}, {"rate", 1.5}}};
    const auto xs = sample(g, n_mc, seed);
    double m = 0.0, v = 0.0;
    for (double x : xs) m += x;
    m /= n_mc;
    for (double x : xs) v += (x - m) * (x - m);
    v /= n_mc - 1;
    rec.le("sampler/gamma_mean", std::abs(m / (2.5 / 1.5) - 1.0), 0.05, "relative");
    rec.le("sampler/gamma_variance", std::abs(v / (2.5 / 2.25) - 1.0), 0.05, "relative");
  });
  rec.guard("sampler/tweedie", [&] {
    const NoiseSpec t{NoiseDist::kTweedie, {{"mu", 2.0}, {"p", 1.5}, {"phi", 1.0}}};
    const auto xs = sample(t, n_mc, seed);
    double m = 0.0;
    std::size_t zeros = 0;
    for (double x : xs) {
      m += x;
      zeros += x == 0.0;
    }
    m /= n_mc;
    rec.le("sampler/tweedie_mean", std::abs(m / 2.0 - 1.0), 0.02, "relative");
    rec.gt("sampler/tweedie_zero_mass", static_cast<double>(zeros) / n_mc, 0.0);
  });
  rec.guard("sampler/double_pareto_tail", [&] {
    const double alpha = 2.0, t = 3.0;
    const NoiseSpec dp{NoiseDist::kDoublePareto, {{"alpha", alpha}}};
    const auto xs = sample(dp, n_mc, seed);
    std::size_t tail = 0;
    for (double x : xs) tail += std::abs(x) > t;
    const double expect = std::pow(1.0 + t, -alpha);
    const double se = std::sqrt(expect * (1 - expect) / n_mc);
    rec.le("sampler/double_pareto_tail", std::abs(static_cast<double>(tail) / n_mc - expect),
           3 * se, "P(|x| > 3) vs (1 + 3)^-2");
  });
  rec.guard("sampler/poisson", [&] {
    for (double lambda : {4.0, 50.0}) {
      const NoiseSpec p{NoiseDist::kPoisson, {{"lambda", lambda}}};
      const auto xs = sample(p, n_mc, seed);
      double m = 0.0, v = 0.0;
      for (double x : xs) m += x;
      m /= n_mc;
      for (double x : xs) v += (x - m) * (x - m);
      v /= n_mc - 1;
      const std::string tag = lambda < 30 ? "small" : "large";
      rec.le("sampler/poisson_mean_" + tag, std::abs(m / lambda - 1.0), 0.05, "relative");
      rec.le("sampler/poisson_variance_" + tag, std::abs(v / lambda - 1.0), 0.05, "relative");
    }
  });
  rec.guard("sampler/lognormal_mean", [&] {
    const double mu = 0.0, s = 0.5;
    const NoiseSpec ln{NoiseDist::kLognormal, {{"mu", mu}, {"sigma", s}}};
    const auto xs = sample(ln, n_mc, seed);
    double m = 0.0;
    for (double x : xs) m += x;
    m /= n_mc;
    const double expect = log_scale_predict(mu, s * s);
    const double sd = expect * std::sqrt(std::expm1(s * s));
    rec.le("sampler/lognormal_mean", std::abs(m - expect), 3 * sd / std::sqrt(double(n_mc)),
           "sample mean vs exp(mu + sigma^2/2)");
  });
  rec.guard("sampler/determinism", [&] {
    const NoiseSpec l{NoiseDist::kLaplace, {{"b", 2.0}}};
    const auto a = sample(l, 1000, seed);
    const auto b = sample(l, 1000, seed);
    std::size_t diff = 0;
    for (std::size_t i = 0; i < a.size(); ++i) diff += a[i] != b[i];
    rec.none("sampler/determinism", diff);
  });
}

// -------------------------------------------------------------- divergences

void check_divergences(Recorder& rec, std::uint64_t seed) {
  Xoshiro256pp rng(seed ^ 0x646976ULL);
  constexpr int pairs = 1000;
  constexpr double slack = 1e-12;
  constexpr double inf = std::numeric_limits<double>::infinity();
  const double ladder[] = {0.0, 0.25, 0.5, 0.9, 1.0, 1.1, 2.0, 5.0, inf};

  std::size_t pinsker = 0, hel_lo = 0, hel_hi = 0, js_bound = 0, js_sym = 0, renyi_mono = 0;
  std::size_t nonneg = 0, self_zero = 0, bc_range = 0, ce = 0;
  double worst_pinsker = -inf;
  for (int i = 0; i < pairs; ++i) {
    const std::size_t k = 2 + rng() % 9;
    auto p = random_distribution(rng, k);
    const auto q = random_distribution(rng, k);
    if (i % 10 == 9) {
      // Some pairs with a zero in p exercise the 0 log 0 conventions.
      const std::size_t z = rng() % k;
      const double mass = p[z];
      p[z] = 0.0;
      for (double& v : p) v /= 1.0 - mass;
    }
    const double kl = divergence(DivergenceKind::kKl, p, q);
    const double tv = divergence(DivergenceKind::kTotalVariation, p, q);
    const double h = divergence(DivergenceKind::kHellinger, p, q);
    const double js = divergence(DivergenceKind::kJensenShannon, p, q);
    worst_pinsker = std::max(worst_pinsker, tv - std::sqrt(kl / 2));
    pinsker += tv > std::sqrt(kl / 2) + slack;
    hel_lo += h * h > tv + slack;
    hel_hi += tv > std::numbers::sqrt2 * h + slack;
    js_bound += js > std::numbers::ln2 + slack;
    js_sym += std::abs(js - divergence(DivergenceKind::kJensenShannon, q, p)) > slack;
    double prev = -inf;
    for (double a : ladder) {
      const double r = renyi(a, p, q);
      renyi_mono += r < prev - slack;
      prev = r;
    }
    for (DivergenceKind kind :
         {DivergenceKind::kKl, DivergenceKind::kHellinger, DivergenceKind::kTotalVariation,
          DivergenceKind::kJensenShannon, DivergenceKind::kBhattacharyya}) {
      nonneg += divergence(kind, p, q) < 0.0;
      self_zero += std::abs(divergence(kind, p, p)) > 1e-9;
    }
    const double bc = bhattacharyya_coefficient(p, q);
    bc_range += !(bc > 0.0 && bc <= 1.0 + slack);
    ce += std::abs(divergence(DivergenceKind::kCrossEntropy, p, q) - entropy(p) - kl) > 1e-12;
  }
  const std::string detail = std::to_string(pairs) + " pairs, K in 2..10";
  rec.none("pinsker", pinsker, detail);
  rec.le("pinsker_worst_margin", worst_pinsker, slack, "max TV - sqrt(KL/2)");
  rec.none("hellinger_squared_below_tv", hel_lo, detail);
  rec.none("tv_below_sqrt2_hellinger", hel_hi, detail);
  rec.none("js_below_ln2", js_bound, detail);
  rec.none("js_symmetric", js_sym, detail);
  rec.none("renyi_nondecreasing_in_alpha", renyi_mono, "alpha in {0,.25,.5,.9,1,1.1,2,5,inf}");
  rec.none("nonnegative", nonneg, detail);
  rec.none("zero_on_identical", self_zero, detail);
  rec.none("bhattacharyya_coefficient_range", bc_range, detail);
  rec.none("cross_entropy_decomposition", ce, detail);

  std::size_t tri = 0;
  for (int i = 0; i < pairs; ++i) {
    const std::size_t k = 2 + rng() % 9;
    const auto p = random_distribution(rng, k);
    const auto q = random_distribution(rng, k);
    const auto r = random_distribution(rng, k);
    const double pq = std::sqrt(divergence(DivergenceKind::kJensenShannon, p, q));
    const double qr = std::sqrt(divergence(DivergenceKind::kJensenShannon, q, r));
    const double pr = std::sqrt(divergence(DivergenceKind::kJensenShannon, p, r));
    tri += pr > pq + qr + slack;
  }
  rec.none("js_distance_triangle", tri, std::to_string(pairs) + " triples");

  // The Bhattacharyya divergence is not a metric: find a violating triple.
  double violation = 0.0;
  for (int i = 0; i < 10000 && violation <= 0.0; ++i) {
    const auto p = random_distribution(rng, 2);
    const auto q = random_distribution(rng, 2);
    const auto r = random_distribution(rng, 2);
    violation = divergence(DivergenceKind::kBhattacharyya, p, r) -
                divergence(DivergenceKind::kBhattacharyya, p, q) -
                divergence(DivergenceKind::kBhattacharyya, q, r);
  }
  rec.gt("bhattacharyya_triangle_violation_found", violation, 0.0,
         "D_B(p,r) - D_B(p,q) - D_B(q,r) for the first violating triple");

  double r_half = 0.0, r_one = 0.0;
  for (int i = 0; i < 100; ++i) {
    const std::size_t k = 2 + rng() % 9;
    const auto p = random_distribution(rng, k);
    const auto q = random_distribution(rng, k);
    r_half = std::max(r_half, std::abs(renyi(0.5, p, q) -
                                       2 * divergence(DivergenceKind::kBhattacharyya, p, q)));
    const double kl = divergence(DivergenceKind::kKl, p, q);
    r_one = std::max(r_one, std::max(std::abs(renyi(1 + 1e-6, p, q) - kl),
                                     std::abs(renyi(1 - 1e-6, p, q) - kl)));
  }
  rec.le("renyi_half_is_twice_bhattacharyya", r_half, 1e-12);
  rec.le("renyi_near_one_is_kl", r_one, 1e-4);
}

// ------------------------------------------------------------------ scoring

void check_scoring(Recorder& rec, std::uint64_t seed) {
  rec.guard("bce_probability_recovery", [&] {
    const RecoveryReport r = bce_probability_recovery(0.3, 100000, seed);
    rec.le("bce_probability_recovery", std::abs(r.recovered_value - 0.3), r.tolerance,
           "recovered=" + format_number(r.recovered_value));
  });

  rec.guard("cce_properness", [&] {
    Xoshiro256pp rng(seed ^ 0x636365ULL);
    constexpr int resolution = 100;
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      const auto q = random_distribution(rng, 4);
      const auto best = cce_risk_minimizer(q, resolution);
      for (std::size_t k = 0; k < 4; ++k) worst = std::max(worst, std::abs(best[k] - q[k]));
    }
    rec.le("cce_properness", worst, 1.0 / resolution,
           "20 random 4-class distributions, grid 1/100");
  });

  rec.guard("bce_conditional_risk", [&] {
    std::size_t argmin_bad = 0, convex_bad = 0;
    for (int j = 1; j <= 9; ++j) {
      const double y = 0.1 * j;
      std::vector<double> risk;
      for (int k = 1; k < 1000; ++k) risk.push_back(bce(y, k * 1e-3));
      const auto it = std::min_element(risk.begin(), risk.end());
      const double at = (std::distance(risk.begin(), it) + 1) * 1e-3;
      argmin_bad += std::abs(at - y) > 1e-9;
      for (std::size_t k = 1; k + 1 < risk.size(); ++k) {
        convex_bad += !(risk[k - 1] - 2 * risk[k] + risk[k + 1] > 0.0);
      }
    }
    rec.none("bce_conditional_risk_argmin", argmin_bad, "y in {0.1, ..., 0.9}, step 1e-3");
    rec.none("bce_conditional_risk_convex", convex_bad, "second differences > 0");
  });
}

}  // namespace

bool SuiteResult::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

bool VerifyReport::passed() const {
  return std::all_of(suites.begin(), suites.end(), [](const SuiteResult& s) { return s.passed(); });
}

std::size_t VerifyReport::check_count() const {
  std::size_t n = 0;
  for (const auto& s : suites) n += s.checks.size();
  return n;
}

std::size_t VerifyReport::failure_count() const {
  std::size_t n = 0;
  for (const auto& s : suites) {
    n += std::count_if(s.checks.begin(), s.checks.end(),
                       [](const CheckResult& c) { return !c.pass; });
  }
  return n;
}

Json VerifyReport::to_json() const {
  Json out = Json::object();
  Json list = Json::array();
  for (const auto& s : suites) {
    Json js = Json::object();
    js["name"] = s.name;
    js["passed"] = s.passed();
    Json checks = Json::array();
    for (const auto& c : s.checks) {
      Json jc = Json::object();
      jc["name"] = c.name;
      jc["measured"] = c.measured;
      jc["comparison"] = c.comparison;
      jc["bound"] = c.bound;
      jc["pass"] = c.pass;
      if (!c.detail.empty()) jc["detail"] = c.detail;
      checks.push_back(std::move(jc));
    }
    js["checks"] = std::move(checks);
    list.push_back(std::move(js));
  }
  out["suites"] = std::move(list);
  Json summary = Json::object();
  summary["passed"] = passed();
  summary["checks"] = check_count();
  summary["failures"] = failure_count();
  out["summary"] = std::move(summary);
  return out;
}

std::span<const std::string_view> suite_names() { return kSuites; }

SuiteResult run_gradcheck_suite(std::uint64_t seed) {
  Recorder rec("gradcheck");
  check_activations(rec);
  check_regression_losses(rec);
  check_classification_losses(rec, seed);
  return rec.finish();
}

SuiteResult run_identities_suite(std::uint64_t seed) {
  Recorder rec("identities");
  check_identities(rec, seed);
  return rec.finish();
}

SuiteResult run_canonical_suite(std::uint64_t seed) {
  Recorder rec("canonical");
  check_canonical(rec, seed);
  return rec.finish();
}

SuiteResult run_estimators_suite(std::uint64_t seed) {
  Recorder rec("estimators");
  check_estimators(rec, seed);
  return rec.finish();
}

SuiteResult run_divergences_suite(std::uint64_t seed) {
  Recorder rec("divergences");
  check_divergences(rec, seed);
  return rec.finish();
}

SuiteResult run_scoring_suite(std::uint64_t seed) {
  Recorder rec("scoring");
  check_scoring(rec, seed);
  return rec.finish();
}

namespace {

using SuiteFn = SuiteResult (*)(std::uint64_t);

SuiteFn suite_function(std::string_view name) {
  if (name == "gradcheck") return run_gradcheck_suite;
  if (name == "identities") return run_identities_suite;
  if (name == "canonical") return run_canonical_suite;
  if (name == "estimators") return run_estimators_suite;
  if (name == "divergences") return run_divergences_suite;
  if (name == "scoring") return run_scoring_suite;
  return nullptr;
}

}  // namespace

VerifyReport run_verify(std::string_view suite, std::uint64_t seed) {
  VerifyReport rep;
  rep.seed = seed;
  if (suite == "all") {
    // Suites are independent; results are collected in name order.
    std::vector<std::future<SuiteResult>> jobs;
    for (std::string_view name : kSuites) {
      jobs.push_back(std::async(std::launch::async, suite_function(name), seed));
    }
    for (auto& j : jobs) rep.suites.push_back(j.get());
    return rep;
  }
  const SuiteFn fn = suite_function(suite);
  if (fn == nullptr) {
    std::string valid = "all";
    for (std::string_view s : kSuites) valid += ", " + std::string(s);
    throw DomainError("unknown suite '" + std::string(suite) + "' (expected one of: " + valid +
                      ")");
  }
  rep.suites.push_back(fn(seed));
  return rep;
}

}  // namespace llk
