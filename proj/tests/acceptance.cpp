// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "llk/activations.hpp"
#include "llk/losses_regression.hpp"
#include "llk/verify.hpp"
#include "run_cli.hpp"

using namespace llk;

namespace {

struct Outcome {
  bool pass = true;
  std::string note;
};

// Checks of a suite whose names start with any of `prefixes`.
std::vector<const CheckResult*> select(const SuiteResult& s,
                                       std::initializer_list<std::string_view> prefixes) {
  std::vector<const CheckResult*> out;
  for (const auto& c : s.checks)
    for (auto p : prefixes)
      if (std::string_view(c.name).substr(0, p.size()) == p) {
        out.push_back(&c);
        break;
      }
  return out;
}

Outcome all_pass(const std::vector<const CheckResult*>& checks, std::size_t expected_min) {
  Outcome o;
  std::size_t failed = 0;
  for (const auto* c : checks) {
    if (!c->pass) {
      ++failed;
      if (o.note.size() < 300) {
        char buf[256];
        std::snprintf(buf, sizeof buf, " [%s: %.6g %s %.6g]", c->name.c_str(), c->measured,
                      c->comparison.c_str(), c->bound);
        o.note += buf;
      }
    }
  }
  o.pass = failed == 0 && checks.size() >= expected_min;
  o.note = std::to_string(checks.size()) + " checks, " + std::to_string(failed) + " failed" + o.note;
  if (checks.size() < expected_min)
    o.note += " (expected at least " + std::to_string(expected_min) + ")";
  return o;
}

std::string measured(const std::vector<const CheckResult*>& checks) {
  std::string s;
  for (const auto* c : checks) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s%s=%.3g", s.empty() ? "" : ", ", c->name.c_str(), c->measured);
    s += buf;
  }
  return s;
}

Outcome cli_pipeline() {
  llk_test::ScratchDir dir;
  const std::string data = dir / "x.csv", model = dir / "m.model";
  const std::vector<std::string> steps = {
      "sample gaussian --mu 2 --sigma 1 --n 2000 --seed 5 --no-timestamp --out " + data,
      "fit --family gaussian --data " + data + " --target x --no-timestamp --out " + model,
      "eval --model " + model + " --data " + data + " --metrics nll,mse,mae --no-timestamp",
      "verify --suite all --no-timestamp",
  };
  std::vector<std::string> first;
  for (int run = 0; run < 2; ++run) {
    std::vector<std::string> outputs;
    for (const auto& step : steps) {
      auto r = llk_test::run_cli(step);
      if (r.exit_code != 0)
        return {false, "`llk " + step.substr(0, step.find(' ')) + "` exited " + std::to_string(r.exit_code)};
      outputs.push_back(r.out);
      if (step.rfind("sample", 0) == 0) outputs.push_back(llk_test::slurp(data));
      if (step.rfind("fit", 0) == 0) outputs.push_back(llk_test::slurp(model));
    }
    if (run == 0) {
      first = outputs;
    } else if (outputs != first) {
      return {false, "second run differs from the first"};
    }
  }
  return {true, "4 steps exit 0, " + std::to_string(first.size()) + " outputs byte-identical across 2 runs"};
}

}  // namespace

int main() {
  const std::uint64_t seed = 42;
  VerifyReport all = run_verify("all", seed);
  std::map<std::string, const SuiteResult*> suite;
  for (const auto& s : all.suites) suite[s.name] = &s;

  std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"gradient checks (16 activations, 18 regression, classification forms)",
       [&] {
         const auto& g = *suite["gradcheck"];
         std::size_t acts = 0;
         for (auto k : differentiable_activation_kinds()) {
           std::string name = "activation/" + std::string(activation_name(k));
           for (const auto& c : g.checks) acts += c.name == name;
         }
         std::size_t regs = 0;
         for (auto k : all_reg_loss_kinds()) {
           std::string name = "regression/" + std::string(reg_loss_name(k));
           for (const auto& c : g.checks) regs += c.name == name;
         }
         auto cls = select(g, {"classification/"});
         Outcome o = all_pass(select(g, {""}), 16 + 18 + 7);
         o.pass = o.pass && acts == 16 && regs == 18 && cls.size() >= 7;
         o.note += "; activations " + std::to_string(acts) + ", regression " + std::to_string(regs) +
                   ", classification " + std::to_string(cls.size());
         return o;
       }},
      {"identities",
       [&] {
         return all_pass(select(*suite["identities"],
                                {"tanh_from_logistic", "logistic_from_tanh",
                                 "softplus_derivative_is_logistic", "softmax_shift_invariance",
                                 "softmax_jacobian_row_sums", "cross_entropy_decomposition",
                                 "bipolar_bce_matches_bce", "pinball_half_is_half_mae",
                                 "squareplus_b0_is_relu"}),
                         9);
       }},
      {"canonical gradient reduction on 64x5 data",
       [&] {
         auto c = select(*suite["canonical"],
                         {"chain_rule_reduction/gaussian", "chain_rule_reduction/bernoulli",
                          "chain_rule_reduction/multinomial"});
         // "bernoulli" also matches bernoulli_bipolar; keep the three canonical pairs plus that one
         Outcome o = all_pass(c, 3);
         o.note += "; " + measured(c);
         return o;
       }},
      {"estimator recovery at n = 2e5",
       [&] {
         auto c = select(*suite["estimators"], {"recovery/"});
         Outcome o = all_pass(c, 3);
         o.note += "; " + measured(c);
         return o;
       }},
      {"proper scoring recovery",
       [&] {
         auto c = select(*suite["scoring"], {"bce_probability_recovery", "cce_properness"});
         Outcome o = all_pass(c, 2);
         o.note += "; " + measured(c);
         return o;
       }},
      {"divergence inequalities on 1000 pairs",
       [&] {
         return all_pass(select(*suite["divergences"],
                                {"pinsker", "hellinger_squared_below_tv", "tv_below_sqrt2_hellinger",
                                 "js_below_ln2", "renyi_nondecreasing_in_alpha"}),
                         5);
       }},
      {"GLM fitting",
       [&] {
         auto c = select(*suite["estimators"], {"glm/"});
         Outcome o = all_pass(c, 6);
         o.note += "; " + measured(c);
         return o;
       }},
      {"robustness ordering",
       [&] {
         auto c = select(*suite["estimators"], {"robustness/"});
         Outcome o = all_pass(c, 2);
         o.note += "; " + measured(c);
         return o;
       }},
      {"CLI pipeline", cli_pipeline},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o = criteria[i].second();
    failures += !o.pass;
    std::printf("%s criterion %zu: %s (%s)\n", o.pass ? "PASS" : "FAIL", i + 1,
                criteria[i].first.c_str(), o.note.c_str());
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
