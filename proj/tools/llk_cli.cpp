// llk command-line tool. Talks to the library only through the C interface.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "llk/llk.h"

namespace {

using Json = nlohmann::ordered_json;

enum ExitCode { kOk = 0, kVerifyFailed = 1, kUsage = 2, kDiverged = 3 };

// Carries a message and exit code out of a subcommand.
struct Failure {
  int code;
  std::string message;
};

void check(llk_status st, const std::string& context) {
  if (st == LLK_OK) return;
  std::string msg = context + ": " + llk_last_error();
  throw Failure{st == LLK_ERR_DIVERGENCE ? kDiverged : kUsage, msg};
}

struct StringDeleter {
  void operator()(char* s) const { llk_string_free(s); }
};
using OwnedString = std::unique_ptr<char, StringDeleter>;

struct DatasetDeleter {
  void operator()(llk_dataset* d) const { llk_dataset_destroy(d); }
};
struct ModelDeleter {
  void operator()(llk_model* m) const { llk_model_destroy(m); }
};
using DatasetPtr = std::unique_ptr<llk_dataset, DatasetDeleter>;
using ModelPtr = std::unique_ptr<llk_model, ModelDeleter>;

std::string normalize_name(std::string s) {
  std::replace(s.begin(), s.end(), '-', '_');
  return s;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct Common {
  std::uint64_t seed = 42;
  bool no_timestamp = false;
  std::string invocation;
};

Json envelope(const Common& c) {
  Json doc = Json::object();
  doc["schema_version"] = "1";
  doc["command"] = c.invocation;
  doc["seed"] = c.seed;
  if (!c.no_timestamp) doc["timestamp"] = utc_timestamp();
  return doc;
}

std::string render(const Json& doc) {
  char* out = nullptr;
  check(llk_report_format(doc.dump().c_str(), &out), "formatting report");
  OwnedString owned(out);
  return std::string(owned.get()) + "\n";
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Failure{kUsage, "cannot open '" + path + "' for writing"};
  f << text;
  if (!f) throw Failure{kUsage, "failed writing '" + path + "'"};
}

std::string number(double v) {
  if (v == 0.0) v = 0.0;  // no "-0" in tables
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// ------------------------------------------------------------------- fit

struct FitArgs {
  std::string family, data, target, link, out, report;
  double lr = 0.1, grad_tol = 1e-8, tweedie_p = 1.5, dispersion = 1.0;
  long max_iter = 10000;
  std::size_t classes = 0;
  bool no_backtracking = false;
  std::uint64_t init_seed = 0;
};

int run_fit(const FitArgs& a, const Common& c) {
  llk_family_spec fam;
  const std::string family = normalize_name(a.family);
  llk_family_spec_init(&fam, family.c_str());
  fam.link = a.link.empty() ? nullptr : a.link.c_str();
  fam.tweedie_p = a.tweedie_p;
  fam.dispersion = a.dispersion;
  check(llk_family_check(&fam), "family");

  llk_dataset* raw = nullptr;
  check(llk_dataset_load_csv(a.data.c_str(), a.target.empty() ? nullptr : a.target.c_str(), &fam,
                             a.classes, &raw),
        "loading '" + a.data + "'");
  DatasetPtr ds(raw);

  llk_fit_config cfg;
  llk_fit_config_init(&cfg);
  cfg.learning_rate = a.lr;
  cfg.max_iters = a.max_iter;
  cfg.grad_tol = a.grad_tol;
  cfg.backtracking = a.no_backtracking ? 0 : 1;
  cfg.seed = a.init_seed;

  llk_model* mraw = nullptr;
  llk_fit_summary sum{};
  check(llk_fit(&fam, ds.get(), &cfg, &mraw, &sum), "fit");
  ModelPtr model(mraw);
  if (!a.out.empty()) check(llk_model_save(model.get(), a.out.c_str()), "saving model");

  const double* w = nullptr;
  std::size_t rows = 0, cols = 0;
  check(llk_model_weights(model.get(), &w, &rows, &cols), "weights");
  Json weights = Json::array();
  for (std::size_t r = 0; r < rows; ++r) {
    Json row = Json::array();
    for (std::size_t k = 0; k < cols; ++k) row.push_back(w[r * cols + k]);
    weights.push_back(std::move(row));
  }

  Json res = Json::object();
  res["family"] = llk_model_family(model.get());
  res["link"] = llk_model_link(model.get());
  res["target"] = llk_dataset_target_name(ds.get());
  res["features"] = llk_dataset_feature_names(ds.get());
  res["rows"] = llk_dataset_rows(ds.get());
  res["weights"] = std::move(weights);
  res["weights_layout"] = "one row per feature, bias last";
  res["final_nll"] = sum.final_nll;
  res["iterations"] = sum.iterations;
  res["converged"] = sum.converged != 0;
  res["stop_reason"] = sum.stop_reason;
  res["grad_norm"] = sum.grad_norm;
  res["separation_flag"] = sum.separation_flag != 0;
  if (!a.out.empty()) res["model"] = a.out;
  if (sum.separation_flag != 0) {
    std::cerr << "warning: training data look linearly separable; the maximum-likelihood "
                 "weights do not exist\n";
  }

  Json doc = envelope(c);
  doc["results"] = std::move(res);
  write_text(a.report, render(doc));
  return kOk;
}

// ------------------------------------------------------------------ eval

struct LossFlags {
  std::optional<double> delta, c, nu, sigma, eps, tau, p, gamma;

  llk_loss_params params() const {
    llk_loss_params lp;
    llk_loss_params_init(&lp);
    if (delta) lp.delta = *delta;
    if (c) lp.c = *c;
    if (nu) lp.nu = *nu;
    if (sigma) lp.sigma = *sigma;
    if (eps) lp.eps = *eps;
    if (tau) lp.tau = *tau;
    if (p) lp.p = *p;
    if (gamma) lp.gamma = *gamma;
    return lp;
  }

  void add_to(CLI::App* app) {
    app->add_option("--delta", delta, "Huber / huberized threshold");
    app->add_option("--c", c, "Cauchy, Fair, Tukey scale");
    app->add_option("--nu", nu, "Student-t degrees of freedom");
    app->add_option("--sigma", sigma, "Student-t scale");
    app->add_option("--eps", eps, "insensitive tube half-width");
    app->add_option("--tau", tau, "pinball quantile");
    app->add_option("--p", p, "Tweedie power");
    app->add_option("--gamma", gamma, "focal exponent");
  }
};

struct EvalArgs {
  std::string model, data, metrics = "nll", report;
  LossFlags loss;
};

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

int run_eval(const EvalArgs& a, const Common& c) {
  const auto metrics = split_list(a.metrics);
  if (metrics.empty()) throw Failure{kUsage, "--metrics is empty"};
  llk_model* mraw = nullptr;
  check(llk_model_load(a.model.c_str(), &mraw), "loading model '" + a.model + "'");
  ModelPtr model(mraw);
  llk_dataset* draw = nullptr;
  check(llk_model_load_dataset(model.get(), a.data.c_str(), &draw), "loading '" + a.data + "'");
  DatasetPtr ds(draw);

  const llk_loss_params lp = a.loss.params();
  Json values = Json::object();
  for (const auto& m : metrics) {
    double v = 0.0;
    check(llk_model_evaluate(model.get(), ds.get(), m.c_str(), &lp, &v), "metric '" + m + "'");
    values[m] = v;
  }
  Json res = Json::object();
  res["family"] = llk_model_family(model.get());
  res["rows"] = llk_dataset_rows(ds.get());
  res["metrics"] = std::move(values);
  Json doc = envelope(c);
  doc["results"] = std::move(res);
  write_text(a.report, render(doc));
  return kOk;
}

// ---------------------------------------------------------------- sample

struct SampleArgs {
  std::string dist, out, report;
  std::size_t n = 1000;
  std::optional<double> mu, sigma, b, alpha, lambda, shape, rate, p, phi;
};

int run_sample(const SampleArgs& a, const Common& c) {
  if (a.dist.empty()) throw Failure{kUsage, "a distribution is required (--dist)"};
  const std::string dist = normalize_name(a.dist);
  std::vector<const char*> names;
  std::vector<double> values;
  const std::pair<const char*, const std::optional<double>*> flags[] = {
      {"mu", &a.mu},         {"sigma", &a.sigma}, {"b", &a.b},       {"alpha", &a.alpha},
      {"lambda", &a.lambda}, {"shape", &a.shape}, {"rate", &a.rate}, {"p", &a.p},
      {"phi", &a.phi}};
  for (const auto& [name, value] : flags) {
    if (value->has_value()) {
      names.push_back(name);
      values.push_back(**value);
    }
  }
  std::vector<double> xs(a.n);
  check(llk_sample(dist.c_str(), names.data(), values.data(), names.size(), a.n, c.seed,
                   xs.data()),
        "sample");

  std::string csv = "x\n";
  for (double x : xs) csv += number(x) + "\n";
  write_text(a.out, csv);

  if (!a.out.empty() && a.out != "-") {
    Json params = Json::object();
    for (std::size_t i = 0; i < names.size(); ++i) params[names[i]] = values[i];
    Json res = Json::object();
    res["dist"] = dist;
    res["params"] = std::move(params);
    res["n"] = a.n;
    res["out"] = a.out;
    Json doc = envelope(c);
    doc["results"] = std::move(res);
    write_text(a.report, render(doc));
  }
  return kOk;
}

// ---------------------------------------------------------------- verify

int run_verify(const std::string& suite, const std::string& report, const Common& c) {
  char* out = nullptr;
  int passed = 0;
  check(llk_verify_run(suite.c_str(), c.seed, &out, &passed), "verify");
  OwnedString owned(out);
  Json body = Json::parse(owned.get());
  Json doc = envelope(c);
  doc["suite"] = suite;
  doc["results"] = std::move(body["suites"]);
  doc["summary"] = std::move(body["summary"]);
  write_text(report, render(doc));
  if (!passed) {
    std::cerr << "verify: " << doc["summary"]["failures"].get<long>() << " check(s) failed\n";
  }
  return passed ? kOk : kVerifyFailed;
}

// ----------------------------------------------------------------- table

struct TableArgs {
  std::string activation, loss, out;
  double from = -6.0, to = 6.0, step = 0.1, y = 0.0;
  std::optional<double> alpha, beta, b, x_c;
  LossFlags loss_flags;
};

int run_table(const TableArgs& a) {
  if (a.activation.empty() == a.loss.empty()) {
    throw Failure{kUsage, "give exactly one of --activation or --loss"};
  }
  if (!(a.step > 0.0)) throw Failure{kUsage, "--step must be > 0"};
  if (!(a.to >= a.from)) throw Failure{kUsage, "--to must be >= --from"};

  const long count = static_cast<long>(std::floor((a.to - a.from) / a.step + 1e-9)) + 1;
  std::string csv;
  if (!a.activation.empty()) {
    const std::string kind = normalize_name(a.activation);
    llk_activation_params ap;
    check(llk_activation_defaults(kind.c_str(), &ap), "activation");
    if (a.alpha) ap.alpha = *a.alpha;
    if (a.beta) ap.beta = *a.beta;
    if (a.b) ap.b = *a.b;
    if (a.x_c) ap.x_c = *a.x_c;
    csv = "z,value,derivative\n";
    for (long i = 0; i < count; ++i) {
      const double z = a.from + static_cast<double>(i) * a.step;
      double v = 0.0, d = 0.0;
      check(llk_activation_eval(kind.c_str(), &ap, z, &v, nullptr), "activation");
      const llk_status st = llk_activation_eval(kind.c_str(), &ap, z, nullptr, &d);
      if (st != LLK_OK && st != LLK_ERR_UNSUPPORTED) check(st, "activation derivative");
      csv += number(z) + "," + number(v) + "," + (st == LLK_OK ? number(d) : "") + "\n";
    }
  } else {
    // Loss tables sweep the prediction yhat = z against a fixed target --y.
    const std::string kind = normalize_name(a.loss);
    const llk_loss_params lp = a.loss_flags.params();
    csv = "z,value,derivative\n";
    for (long i = 0; i < count; ++i) {
      const double z = a.from + static_cast<double>(i) * a.step;
      double v = 0.0, g = 0.0;
      check(llk_loss_eval(kind.c_str(), &lp, a.y, z, &v, &g), "loss at yhat=" + number(z));
      csv += number(z) + "," + number(v) + "," + number(g) + "\n";
    }
  }
  write_text(a.out, csv);
  return kOk;
}

std::uint64_t default_seed() {
  const char* env = std::getenv("LLK_SEED");
  if (env == nullptr || *env == '\0') return 42;
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(env, &used);
    if (used != std::string(env).size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw Failure{kUsage, std::string("LLK_SEED is not an unsigned integer: '") + env + "'"};
  }
}

std::string join_args(int argc, char** argv) {
  std::string s;
  for (int i = 1; i < argc; ++i) {
    if (i > 1) s += ' ';
    s += argv[i];
  }
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  Common common;
  try {
    common.seed = default_seed();
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << "\n";
    return f.code;
  }
  common.invocation = join_args(argc, argv);

  CLI::App app{"llk: GLM fitting, losses, activations and verification suites"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(llk_version()));
  app.add_flag("--no-timestamp", common.no_timestamp, "omit the report timestamp");
  app.add_option("--seed", common.seed, "random seed (default: LLK_SEED or 42)");

  auto add_common = [&](CLI::App* sub) {
    sub->add_flag("--no-timestamp", common.no_timestamp, "omit the report timestamp");
    sub->add_option("--seed", common.seed, "random seed (default: LLK_SEED or 42)");
  };

  FitArgs fa;
  auto* fit = app.add_subcommand("fit", "fit a GLM to a CSV file");
  fit->add_option("--family", fa.family, "gaussian, laplace, bernoulli, bernoulli_bipolar, "
                                         "multinomial, poisson, gamma, tweedie")
      ->required();
  fit->add_option("--data", fa.data, "training CSV")->required();
  fit->add_option("--target", fa.target, "target column (default: last column)");
  fit->add_option("--link", fa.link, "link function (default: the family's)");
  fit->add_option("--lr", fa.lr, "initial step size")->capture_default_str();
  fit->add_option("--max-iter", fa.max_iter, "iteration cap")->capture_default_str();
  fit->add_option("--grad-tol", fa.grad_tol, "gradient infinity-norm tolerance")
      ->capture_default_str();
  fit->add_option("--tweedie-p", fa.tweedie_p, "Tweedie power in (1, 2)")->capture_default_str();
  fit->add_option("--dispersion", fa.dispersion, "sigma^2, b or phi")->capture_default_str();
  fit->add_option("--classes", fa.classes, "multinomial class count (default: inferred)");
  fit->add_flag("--no-backtracking", fa.no_backtracking, "fixed step, no line search");
  fit->add_option("--init-seed", fa.init_seed, "small random initial weights (0: zeros)");
  fit->add_option("--out", fa.out, "model file to write");
  fit->add_option("--report", fa.report, "report path (default: stdout)");
  add_common(fit);

  EvalArgs ea;
  auto* eval = app.add_subcommand("eval", "evaluate a saved model on a CSV file");
  eval->add_option("--model", ea.model, "model file")->required();
  eval->add_option("--data", ea.data, "CSV file with the training layout")->required();
  eval->add_option("--metrics", ea.metrics,
                   "comma list: nll, bce, cce, bipolar_bce or regression loss names")
      ->capture_default_str();
  eval->add_option("--report", ea.report, "report path (default: stdout)");
  ea.loss.add_to(eval);
  add_common(eval);

  SampleArgs sa;
  auto* samp = app.add_subcommand("sample", "draw samples to a one-column CSV");
  samp->add_option("dist,--dist", sa.dist,
                   "gaussian, laplace, double_pareto, poisson, gamma, tweedie, lognormal");
  samp->add_option("--n", sa.n, "number of draws")->capture_default_str();
  samp->add_option("--out", sa.out, "CSV path (default: stdout)");
  samp->add_option("--report", sa.report, "report path when --out is a file (default: stdout)");
  samp->add_option("--mu", sa.mu, "location / mean");
  samp->add_option("--sigma", sa.sigma, "scale");
  samp->add_option("--b", sa.b, "Laplace scale");
  samp->add_option("--alpha", sa.alpha, "double Pareto tail index");
  samp->add_option("--lambda", sa.lambda, "Poisson rate");
  samp->add_option("--shape", sa.shape, "Gamma shape");
  samp->add_option("--rate", sa.rate, "Gamma rate");
  samp->add_option("--p", sa.p, "Tweedie power");
  samp->add_option("--phi", sa.phi, "Tweedie dispersion");
  add_common(samp);

  std::string suite = "all", verify_report;
  auto* ver = app.add_subcommand("verify", "run property suites");
  ver->add_option("--suite", suite,
                  "gradcheck, identities, canonical, estimators, divergences, scoring or all")
      ->capture_default_str();
  ver->add_option("--report", verify_report, "report path (default: stdout)");
  add_common(ver);

  TableArgs ta;
  auto* table = app.add_subcommand("table", "tabulate an activation or loss on a grid");
  table->add_option("--activation", ta.activation, "activation name");
  table->add_option("--loss", ta.loss, "scalar loss name (swept over yhat)");
  table->add_option("--from", ta.from, "grid start")->capture_default_str();
  table->add_option("--to", ta.to, "grid end")->capture_default_str();
  table->add_option("--step", ta.step, "grid step")->capture_default_str();
  table->add_option("--y", ta.y, "target for loss tables")->capture_default_str();
  table->add_option("--alpha", ta.alpha, "activation alpha");
  table->add_option("--beta", ta.beta, "activation beta");
  table->add_option("--b", ta.b, "squareplus b");
  table->add_option("--x-c", ta.x_c, "DELU threshold");
  ta.loss_flags.add_to(table);
  table->add_option("--out", ta.out, "CSV path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*fit) return run_fit(fa, common);
    if (*eval) return run_eval(ea, common);
    if (*samp) return run_sample(sa, common);
    if (*ver) return run_verify(suite, verify_report, common);
    if (*table) return run_table(ta);
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << "\n";
    return f.code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
