#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "run_cli.hpp"

using llk_test::run_cli;
using llk_test::ScratchDir;
using llk_test::slurp;
using llk_test::spit;
using Json = nlohmann::json;

namespace {

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

std::string linear_csv() {
  std::ostringstream s;
  s.precision(17);
  s << "x1,x2,y\n";
  for (int i = 0; i < 40; ++i) {
    double a = std::sin(0.7 * i), b = std::cos(1.3 * i);
    s << a << "," << b << "," << 2.0 * a - 0.5 * b + 0.25 << "\n";
  }
  return s.str();
}

}  // namespace

TEST(Cli, NoiselessGaussianFitAndEval) {
  ScratchDir dir;
  spit(dir / "d.csv", linear_csv());
  auto fit = run_cli("fit --family gaussian --data " + dir / "d.csv" + " --lr 1 --grad-tol 1e-10 --out " +
                     dir / "m.model" + " --no-timestamp");
  ASSERT_EQ(fit.exit_code, 0) << fit.out;
  auto rep = Json::parse(fit.out);
  EXPECT_EQ(rep["schema_version"], "1");
  EXPECT_FALSE(rep.contains("timestamp"));
  EXPECT_TRUE(rep["results"]["converged"].get<bool>());
  auto w = rep["results"]["weights"];
  EXPECT_NEAR(w[0][0].get<double>(), 2.0, 1e-6);
  EXPECT_NEAR(w[1][0].get<double>(), -0.5, 1e-6);
  EXPECT_NEAR(w[2][0].get<double>(), 0.25, 1e-6);

  auto ev = run_cli("eval --model " + dir / "m.model" + " --data " + dir / "d.csv" + " --metrics mae,mse");
  ASSERT_EQ(ev.exit_code, 0);
  auto er = Json::parse(ev.out);
  ASSERT_TRUE(er["results"]["metrics"].contains("mae"));
  EXPECT_LE(er["results"]["metrics"]["mse"].get<double>(), 1e-10);
  EXPECT_TRUE(er.contains("timestamp"));
}

TEST(Cli, SeparableBernoulliWarnsButSucceeds) {
  ScratchDir dir;
  spit(dir / "s.csv", "x,y\n-2,0\n-1,0\n-0.5,0\n0.5,1\n1,1\n2,1\n");
  auto r = run_cli("fit --family bernoulli --data " + dir / "s.csv" + " --max-iter 500");
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_TRUE(Json::parse(r.out)["results"]["separation_flag"].get<bool>());
}

TEST(Cli, UsageAndDataErrors) {
  ScratchDir dir;
  spit(dir / "d.csv", linear_csv());
  spit(dir / "bad.csv", "x,y\n1,2\n3,x\n");
  EXPECT_EQ(run_cli("fit --family gausian --data " + dir / "d.csv").exit_code, 2);
  EXPECT_EQ(run_cli("fit --family gaussian --data " + dir / "bad.csv").exit_code, 2);
  EXPECT_EQ(run_cli("fit --family gaussian --data " + dir / "missing.csv").exit_code, 2);
  EXPECT_EQ(run_cli("fit --family gaussian --data " + dir / "d.csv" + " --target nope").exit_code, 2);
  EXPECT_EQ(run_cli("frobnicate").exit_code, 2);

  ASSERT_EQ(run_cli("fit --family gaussian --data " + dir / "d.csv" + " --out " + dir / "m.model").exit_code, 0);
  EXPECT_EQ(run_cli("eval --model " + dir / "m.model" + " --data " + dir / "d.csv" + " --metrics msee").exit_code, 2);
  spit(dir / "narrow.csv", "x1,y\n1,2\n");
  EXPECT_EQ(run_cli("eval --model " + dir / "m.model" + " --data " + dir / "narrow.csv").exit_code, 2);
}

TEST(Cli, SampleIsDeterministic) {
  ScratchDir dir;
  ASSERT_EQ(run_cli("sample gaussian --sigma 1 --n 5 --seed 7 --out " + dir / "a.csv").exit_code, 0);
  ASSERT_EQ(run_cli("sample gaussian --sigma 1 --n 5 --seed 7 --out " + dir / "b.csv").exit_code, 0);
  auto a = slurp(dir / "a.csv");
  EXPECT_EQ(a, slurp(dir / "b.csv"));
  auto rows = csv_rows(a);
  ASSERT_EQ(rows.size(), 6u);
  EXPECT_EQ(rows[0][0], "x");
}

TEST(Cli, SampleDistributions) {
  auto dp = run_cli("sample double-pareto --alpha 2 --n 1000 --seed 3");
  ASSERT_EQ(dp.exit_code, 0);
  auto rows = csv_rows(dp.out);
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_TRUE(std::isfinite(std::stod(rows[i][0])));

  auto tw = run_cli("sample tweedie --p 1.5 --mu 2 --phi 1 --n 500 --seed 3");
  ASSERT_EQ(tw.exit_code, 0);
  int zeros = 0;
  for (const auto& r : csv_rows(tw.out))
    if (r[0] != "x" && std::stod(r[0]) == 0.0) ++zeros;
  EXPECT_GT(zeros, 0);

  EXPECT_EQ(run_cli("sample gaussian --sigma -1 --n 5").exit_code, 2);
}

TEST(Cli, DefaultSeedIs42) {
  ::unsetenv("LLK_SEED");
  auto a = run_cli("sample gaussian --n 3");
  auto b = run_cli("sample gaussian --n 3 --seed 42");
  EXPECT_EQ(a.out, b.out);
  auto c = run_cli("sample gaussian --n 3 --seed 43");
  EXPECT_NE(a.out, c.out);
  ::setenv("LLK_SEED", "43", 1);
  auto d = run_cli("sample gaussian --n 3");
  ::unsetenv("LLK_SEED");
  EXPECT_EQ(d.out, c.out);
}

TEST(Cli, VerifySuite) {
  auto r = run_cli("verify --suite identities --no-timestamp");
  ASSERT_EQ(r.exit_code, 0);
  auto doc = Json::parse(r.out);
  EXPECT_EQ(doc["summary"]["failures"].get<int>(), 0);
  EXPECT_EQ(run_cli("verify --suite nonsense").exit_code, 2);
}

TEST(Cli, ActivationTable) {
  auto r = run_cli("table --activation logistic --from -6 --to 6 --step 0.5");
  ASSERT_EQ(r.exit_code, 0);
  auto rows = csv_rows(r.out);
  ASSERT_EQ(rows[0], (std::vector<std::string>{"z", "value", "derivative"}));
  EXPECT_EQ(rows.size(), 26u);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    double v = std::stod(rows[i][1]);
    EXPECT_GT(v, 0.0);
    EXPECT_LT(v, 1.0);
  }
}

TEST(Cli, LossTableGradientBounded) {
  auto r = run_cli("table --loss huber --delta 1 --from -5 --to 5 --step 0.25");
  ASSERT_EQ(r.exit_code, 0);
  auto rows = csv_rows(r.out);
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_LE(std::abs(std::stod(rows[i][2])), 1.0);
}

TEST(Cli, HeavisideDerivativeEmpty) {
  auto r = run_cli("table --activation heaviside --from -1 --to 1 --step 0.5");
  ASSERT_EQ(r.exit_code, 0);
  auto rows = csv_rows(r.out);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    ASSERT_EQ(rows[i].size(), 3u);
    EXPECT_EQ(rows[i][2], "");
  }
}

TEST(Cli, TableRejectsNonPositiveStep) {
  EXPECT_EQ(run_cli("table --activation relu --step 0").exit_code, 2);
  EXPECT_EQ(run_cli("table --activation relu --step -1").exit_code, 2);
}
