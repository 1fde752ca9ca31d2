#include "llk/llk.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <string>
#include <string_view>
#include <vector>

#include "llk/activations.hpp"
#include "llk/bayes_lab.hpp"
#include "llk/divergences.hpp"
#include "llk/error.hpp"
#include "llk/glm.hpp"
#include "llk/losses_classification.hpp"
#include "llk/losses_regression.hpp"
#include "llk/report.hpp"
#include "llk/table_io.hpp"
#include "llk/verify.hpp"

struct llk_dataset {
  llk::Dataset data;
  llk::GlmFamily family;
  std::vector<std::string> feature_names;
  std::string feature_names_joined;
  std::string target_name;
};

struct llk_model {
  llk::Model model;
  std::vector<double> history;
};

namespace {

thread_local std::string g_last_error;

// Invalid arguments detected at the boundary itself.
struct ArgumentError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

template <typename F>
llk_status guarded(F&& body) {
  g_last_error.clear();
  try {
    body();
    return LLK_OK;
  } catch (const ArgumentError& e) {
    g_last_error = e.what();
    return LLK_ERR_INVALID_ARGUMENT;
  } catch (const llk::DomainError& e) {
    g_last_error = e.what();
    return LLK_ERR_DOMAIN;
  } catch (const llk::UnsupportedError& e) {
    g_last_error = e.what();
    return LLK_ERR_UNSUPPORTED;
  } catch (const llk::DivergenceError& e) {
    g_last_error = e.what();
    return LLK_ERR_DIVERGENCE;
  } catch (const llk::DataError& e) {
    g_last_error = e.what();
    return LLK_ERR_DATA;
  } catch (const llk::Json::exception& e) {
    g_last_error = e.what();
    return LLK_ERR_DATA;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return LLK_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return LLK_ERR_INTERNAL;
  }
}

void require(const void* p, const char* what) {
  if (p == nullptr) throw ArgumentError(std::string(what) + " must not be null");
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

// Unknown names are argument errors at this boundary, not domain errors.
template <class Parse>
auto named(Parse parse, std::string_view name) {
  try {
    return parse(name);
  } catch (const llk::DomainError& e) {
    throw ArgumentError(e.what());
  }
}

llk::ActivationSpec to_spec(const char* kind, const llk_activation_params* p) {
  require(kind, "kind");
  llk::ActivationSpec s = llk::ActivationSpec::defaults(named(llk::parse_activation, kind));
  if (p != nullptr) {
    s.alpha = p->alpha;
    s.beta = p->beta;
    s.b = p->b;
    s.x_c = p->x_c;
  }
  s.validate();
  return s;
}

llk::RegLossSpec to_reg(llk::RegLossKind kind, const llk_loss_params* p) {
  llk::RegLossSpec s = llk::RegLossSpec::of(kind);
  if (p != nullptr) {
    s.delta = p->delta;
    s.c = p->c;
    s.nu = p->nu;
    s.sigma = p->sigma;
    s.eps = p->eps;
    s.tau = p->tau;
    s.p = p->p;
  }
  s.validate();
  return s;
}

llk::GlmFamily to_family(const llk_family_spec* f) {
  require(f, "family");
  require(f->family, "family name");
  llk::GlmFamily g = llk::GlmFamily::of(named(llk::parse_family, f->family));
  if (f->link != nullptr && f->link[0] != '\0') g.link = named(llk::parse_link, f->link);
  g.tweedie_p = f->tweedie_p;
  g.dispersion = f->dispersion;
  g.validate();
  return g;
}

std::span<const double> span_of(const double* p, std::size_t k) {
  require(p, "vector");
  return {p, k};
}

std::string join(const std::vector<std::string>& names) {
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i != 0) out += ',';
    out += names[i];
  }
  return out;
}

llk_dataset* load_dataset(const std::string& path, const char* target,
                          const llk::GlmFamily& family, std::size_t classes) {
  const llk::CsvTable table = llk::read_csv_file(path);
  if (table.header.empty()) throw llk::DataError("CSV has no columns");
  const std::string tname = target != nullptr && target[0] != '\0' ? target : table.header.back();
  auto ds = std::make_unique<llk_dataset>();
  ds->data = llk::dataset_from_csv(table, tname, family, classes);
  ds->family = family;
  ds->target_name = tname;
  for (const auto& h : table.header) {
    if (h != tname) ds->feature_names.push_back(h);
  }
  ds->feature_names_joined = join(ds->feature_names);
  return ds.release();
}

double mean_metric(const llk::Model& m, const llk::Dataset& ds, const std::string& metric,
                   const llk_loss_params* params) {
  using llk::Family;
  const auto& fam = m.family;
  if (ds.num_features() != m.features) {
    throw llk::DataError("dataset has " + std::to_string(ds.num_features()) +
                         " feature columns but the model expects " +
                         std::to_string(m.features));
  }
  ds.validate(fam);
  if (metric == "nll") return llk::nll(fam, ds, m.weights);

  const std::size_t n = ds.size();
  double total = 0.0;
  if (metric == "cce") {
    if (fam.name != Family::kMultinomial) throw llk::DomainError("cce needs a multinomial model");
    for (std::size_t i = 0; i < n; ++i) {
      const auto p = llk::predict(fam, m.weights, ds.features.row(i));
      total += llk::cce({static_cast<std::size_t>(ds.targets[i]), p.size()}, p);
    }
    return total / n;
  }
  if (fam.name == Family::kMultinomial) {
    throw llk::DomainError("metric '" + metric + "' needs a scalar-output model");
  }
  std::vector<double> mu(n);
  for (std::size_t i = 0; i < n; ++i) mu[i] = llk::predict(fam, m.weights, ds.features.row(i))[0];
  if (metric == "bce") {
    if (fam.name != Family::kBernoulli) throw llk::DomainError("bce needs a bernoulli model");
    for (std::size_t i = 0; i < n; ++i) total += llk::bce(ds.targets[i], mu[i]);
    return total / n;
  }
  if (metric == "bipolar_bce") {
    if (fam.name != Family::kBernoulliBipolar) {
      throw llk::DomainError("bipolar_bce needs a bernoulli_bipolar model");
    }
    for (std::size_t i = 0; i < n; ++i) total += llk::bipolar_bce(ds.targets[i], mu[i]);
    return total / n;
  }
  if (!llk::is_reg_loss_name(metric)) {
    throw ArgumentError("unknown metric '" + metric +
                        "'; expected nll, bce, cce, bipolar_bce or a regression loss name");
  }
  const llk::RegLossSpec spec = to_reg(named(llk::parse_reg_loss, metric), params);
  for (std::size_t i = 0; i < n; ++i) total += llk::reg_loss(spec, ds.targets[i], mu[i]);
  return total / n;
}

const std::string& scalar_loss_names() {
  static const std::string names = [] {
    std::string s;
    for (auto k : llk::all_reg_loss_kinds()) s += std::string(llk::reg_loss_name(k)) + ' ';
    s += "bce bce_from_logits bipolar_bce hinge squared_hinge";
    return s;
  }();
  return names;
}

}  // namespace

extern "C" {

const char* llk_version(void) { return "1.0.0"; }

const char* llk_status_name(llk_status status) {
  switch (status) {
    case LLK_OK: return "ok";
    case LLK_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case LLK_ERR_DOMAIN: return "domain_error";
    case LLK_ERR_UNSUPPORTED: return "unsupported";
    case LLK_ERR_DIVERGENCE: return "divergence";
    case LLK_ERR_DATA: return "data_error";
    case LLK_ERR_INTERNAL: return "internal_error";
  }
  return "unknown";
}

const char* llk_last_error(void) { return g_last_error.c_str(); }

void llk_string_free(char* s) { std::free(s); }

llk_status llk_activation_defaults(const char* kind, llk_activation_params* out) {
  return guarded([&] {
    require(kind, "kind");
    require(out, "out");
    const auto s = llk::ActivationSpec::defaults(named(llk::parse_activation, kind));
    *out = {s.alpha, s.beta, s.b, s.x_c};
  });
}

llk_status llk_activation_eval(const char* kind, const llk_activation_params* params, double z,
                               double* value, double* deriv) {
  return guarded([&] {
    const auto s = to_spec(kind, params);
    const double v = value != nullptr ? llk::act_value(s, z) : 0.0;
    const double d = deriv != nullptr ? llk::act_deriv(s, z) : 0.0;
    if (value != nullptr) *value = v;
    if (deriv != nullptr) *deriv = d;
  });
}

void llk_loss_params_init(llk_loss_params* params) {
  if (params == nullptr) return;
  const llk::RegLossSpec s;
  *params = {s.delta, s.c, s.nu, s.sigma, s.eps, s.tau, s.p, 2.0};
}

llk_status llk_loss_eval(const char* kind, const llk_loss_params* params, double y, double yhat,
                         double* value, double* grad) {
  return guarded([&] {
    require(kind, "kind");
    const std::string name = kind;
    double v = 0.0, g = 0.0;
    if (llk::is_reg_loss_name(name)) {
      const auto s = to_reg(named(llk::parse_reg_loss, name), params);
      if (value != nullptr) v = llk::reg_loss(s, y, yhat);
      if (grad != nullptr) g = llk::reg_loss_grad(s, y, yhat);
    } else if (name == "bce") {
      if (value != nullptr) v = llk::bce(y, yhat);
      if (grad != nullptr) g = llk::bce_grad(y, yhat);
    } else if (name == "bce_from_logits") {
      if (value != nullptr) v = llk::bce_from_logits(y, yhat);
      if (grad != nullptr) g = llk::bce_from_logits_grad(y, yhat);
    } else if (name == "bipolar_bce") {
      if (value != nullptr) v = llk::bipolar_bce(y, yhat);
      if (grad != nullptr) g = llk::bipolar_bce_grad(y, yhat);
    } else if (name == "hinge" || name == "squared_hinge") {
      const auto hk = name == "hinge" ? llk::HingeKind::kBinary : llk::HingeKind::kSquared;
      if (value != nullptr) v = llk::hinge(hk, y, yhat);
      if (grad != nullptr) g = llk::hinge_grad(hk, y, yhat);
    } else {
      throw ArgumentError("unknown loss '" + name + "'; valid: " + scalar_loss_names());
    }
    if (value != nullptr) *value = v;
    if (grad != nullptr) *grad = g;
  });
}

llk_status llk_loss_eval_vector(const char* kind, const llk_loss_params* params,
                                size_t target, const double* yhat, size_t k, double* value,
                                double* grad) {
  return guarded([&] {
    require(kind, "kind");
    const std::string name = kind;
    const auto x = span_of(yhat, k);
    const llk::OneHot t{target, k};
    t.validate();
    const double gamma = params != nullptr ? params->gamma : 2.0;
    double v = 0.0;
    std::vector<double> g;
    if (name == "cce") {
      v = llk::cce(t, x);
      if (grad != nullptr) g = llk::cce_grad(t, x);
    } else if (name == "cce_from_logits") {
      v = llk::cce_from_logits(t, x);
      if (grad != nullptr) g = llk::cce_from_logits_grad(t, x);
    } else if (name == "focal") {
      v = llk::focal(t, x, gamma);
      if (grad != nullptr) g = llk::focal_grad(t, x, gamma);
    } else if (name == "crammer_singer" || name == "weston_watkins") {
      const auto hk = named(llk::parse_hinge, name);
      v = llk::hinge(hk, t, x);
      if (grad != nullptr) g = llk::hinge_grad(hk, t, x);
    } else {
      throw ArgumentError("unknown vector loss '" + name +
                          "'; valid: cce cce_from_logits focal crammer_singer weston_watkins");
    }
    if (value != nullptr) *value = v;
    if (grad != nullptr) std::copy(g.begin(), g.end(), grad);
  });
}

const char* llk_loss_names(void) { return scalar_loss_names().c_str(); }

llk_status llk_divergence(const char* kind, const double* p, const double* q, size_t k,
                          double* out) {
  return guarded([&] {
    require(kind, "kind");
    require(out, "out");
    *out = llk::divergence(named(llk::parse_divergence, kind), span_of(p, k), span_of(q, k));
  });
}

llk_status llk_renyi(double alpha, const double* p, const double* q, size_t k, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = llk::renyi(alpha, span_of(p, k), span_of(q, k));
  });
}

llk_status llk_wasserstein(double order, const double* p, const double* q, size_t k,
                           double* out) {
  return guarded([&] {
    require(out, "out");
    *out = llk::wasserstein(order, span_of(p, k), span_of(q, k));
  });
}

void llk_family_spec_init(llk_family_spec* spec, const char* family) {
  if (spec == nullptr) return;
  const llk::GlmFamily g;
  *spec = {family, nullptr, g.tweedie_p, g.dispersion};
}

llk_status llk_family_check(const llk_family_spec* spec) {
  return guarded([&] { to_family(spec); });
}

llk_status llk_dataset_load_csv(const char* path, const char* target,
                                const llk_family_spec* family, size_t classes,
                                llk_dataset** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = nullptr;
    *out = load_dataset(path, target, to_family(family), classes);
  });
}

size_t llk_dataset_rows(const llk_dataset* ds) { return ds != nullptr ? ds->data.size() : 0; }

size_t llk_dataset_features(const llk_dataset* ds) {
  return ds != nullptr ? ds->data.num_features() : 0;
}

const char* llk_dataset_feature_names(const llk_dataset* ds) {
  return ds != nullptr ? ds->feature_names_joined.c_str() : "";
}

const char* llk_dataset_target_name(const llk_dataset* ds) {
  return ds != nullptr ? ds->target_name.c_str() : "";
}

void llk_dataset_destroy(llk_dataset* ds) { delete ds; }

void llk_fit_config_init(llk_fit_config* config) {
  if (config == nullptr) return;
  const llk::FitConfig c;
  *config = {c.learning_rate, c.max_iters, c.grad_tol, c.backtracking ? 1 : 0, c.seed};
}

llk_status llk_fit(const llk_family_spec* family, const llk_dataset* data,
                   const llk_fit_config* config, llk_model** model, llk_fit_summary* summary) {
  return guarded([&] {
    require(data, "data");
    require(model, "model");
    *model = nullptr;
    const llk::GlmFamily fam = to_family(family);
    llk::FitConfig cfg;
    if (config != nullptr) {
      cfg.learning_rate = config->learning_rate;
      cfg.max_iters = config->max_iters;
      cfg.grad_tol = config->grad_tol;
      cfg.backtracking = config->backtracking != 0;
      cfg.seed = config->seed;
    }
    llk::FitReport rep = llk::fit(fam, data->data, cfg);
    auto m = std::make_unique<llk_model>();
    m->model.family = fam;
    m->model.weights = std::move(rep.weights);
    m->model.features = data->data.num_features();
    m->model.classes = m->model.weights.cols;
    m->model.feature_names = data->feature_names;
    m->model.target_name = data->target_name;
    m->history = std::move(rep.nll_history);
    if (summary != nullptr) {
      *summary = {rep.final_nll, rep.iterations, rep.converged ? 1 : 0, rep.grad_norm,
                  rep.separation_flag ? 1 : 0, llk::stop_reason_name(rep.stop_reason).data()};
    }
    *model = m.release();
  });
}

llk_status llk_model_history(const llk_model* model, const double** values, size_t* count) {
  return guarded([&] {
    require(model, "model");
    require(values, "values");
    require(count, "count");
    *values = model->history.data();
    *count = model->history.size();
  });
}

llk_status llk_model_save(const llk_model* model, const char* path) {
  return guarded([&] {
    require(model, "model");
    require(path, "path");
    llk::write_model_file(path, model->model);
  });
}

llk_status llk_model_load(const char* path, llk_model** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = nullptr;
    auto m = std::make_unique<llk_model>();
    m->model = llk::read_model_file(path);
    *out = m.release();
  });
}

llk_status llk_model_weights(const llk_model* model, const double** data, size_t* rows,
                             size_t* cols) {
  return guarded([&] {
    require(model, "model");
    require(data, "data");
    *data = model->model.weights.data.data();
    if (rows != nullptr) *rows = model->model.weights.rows;
    if (cols != nullptr) *cols = model->model.weights.cols;
  });
}

const char* llk_model_family(const llk_model* model) {
  return model != nullptr ? llk::family_name(model->model.family.name).data() : "";
}

const char* llk_model_link(const llk_model* model) {
  return model != nullptr ? llk::link_name(model->model.family.link).data() : "";
}

void llk_model_destroy(llk_model* model) { delete model; }

llk_status llk_model_evaluate(const llk_model* model, const llk_dataset* data,
                              const char* metric, const llk_loss_params* params, double* out) {
  return guarded([&] {
    require(model, "model");
    require(data, "data");
    require(metric, "metric");
    require(out, "out");
    *out = mean_metric(model->model, data->data, metric, params);
  });
}

llk_status llk_model_load_dataset(const llk_model* model, const char* path, llk_dataset** out) {
  return guarded([&] {
    require(model, "model");
    require(path, "path");
    require(out, "out");
    *out = nullptr;
    const auto& m = model->model;
    const std::size_t classes = m.family.name == llk::Family::kMultinomial ? m.classes : 0;
    const char* target = m.target_name.empty() ? nullptr : m.target_name.c_str();
    *out = load_dataset(path, target, m.family, classes);
  });
}

llk_status llk_sample(const char* dist, const char* const* names, const double* values,
                      size_t nparams, size_t n, uint64_t seed, double* out) {
  return guarded([&] {
    require(dist, "dist");
    if (n > 0) require(out, "out");
    if (nparams > 0) {
      require(names, "names");
      require(values, "values");
    }
    llk::NoiseSpec spec;
    spec.dist = named(llk::parse_noise, dist);
    for (std::size_t i = 0; i < nparams; ++i) {
      require(names[i], "parameter name");
      spec.params[names[i]] = values[i];
    }
    const auto xs = llk::sample(spec, n, seed);
    std::copy(xs.begin(), xs.end(), out);
  });
}

llk_status llk_verify_run(const char* suite, uint64_t seed, char** json, int* all_passed) {
  return guarded([&] {
    require(suite, "suite");
    require(json, "json");
    *json = nullptr;
    const llk::VerifyReport rep = llk::run_verify(suite, seed);
    if (all_passed != nullptr) *all_passed = rep.passed() ? 1 : 0;
    *json = dup_string(llk::to_report_text(rep.to_json()));
  });
}

llk_status llk_report_format(const char* json, char** out) {
  return guarded([&] {
    require(json, "json");
    require(out, "out");
    *out = nullptr;
    const llk::Json doc = llk::Json::parse(json);
    *out = dup_string(llk::to_report_text(doc));
  });
}

}  // extern "C"
