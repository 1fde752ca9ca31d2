#include <gtest/gtest.h>

#include <string>

#include "llk/error.hpp"
#include "llk/verify.hpp"

using namespace llk;

namespace {

void expect_all_pass(const SuiteResult& s) {
  EXPECT_FALSE(s.checks.empty());
  for (const auto& c : s.checks)
    EXPECT_TRUE(c.pass) << s.name << "/" << c.name << ": " << c.measured << " " << c.comparison
                        << " " << c.bound << " " << c.detail;
}

}  // namespace

// The gradcheck and estimator suites run from the acceptance binary.
TEST(Verify, IdentitiesPass) { expect_all_pass(run_identities_suite(42)); }
TEST(Verify, CanonicalPass) { expect_all_pass(run_canonical_suite(42)); }
TEST(Verify, DivergencesPass) { expect_all_pass(run_divergences_suite(42)); }
TEST(Verify, ScoringPass) { expect_all_pass(run_scoring_suite(42)); }

TEST(Verify, OtherSeed) { expect_all_pass(run_divergences_suite(1234)); }

TEST(Verify, SuiteNamesSorted) {
  auto names = suite_names();
  ASSERT_EQ(names.size(), 6u);
  for (std::size_t i = 1; i < names.size(); ++i) EXPECT_LT(names[i - 1], names[i]);
}

TEST(Verify, UnknownSuiteThrows) { EXPECT_THROW(run_verify("nonsense", 1), DomainError); }

TEST(Verify, ReportShape) {
  auto r = run_verify("scoring", 42);
  auto j = r.to_json();
  ASSERT_TRUE(j.contains("suites"));
  ASSERT_TRUE(j.contains("summary"));
  EXPECT_EQ(j["summary"]["checks"].get<std::size_t>(), r.check_count());
  EXPECT_EQ(j["summary"]["failures"].get<std::size_t>(), 0u);
  const auto& check = j["suites"][0]["checks"][0];
  for (const char* key : {"name", "measured", "comparison", "bound", "pass"})
    EXPECT_TRUE(check.contains(key)) << key;
}

TEST(Verify, Deterministic) {
  auto a = to_report_text(run_verify("divergences", 9).to_json());
  auto b = to_report_text(run_verify("divergences", 9).to_json());
  EXPECT_EQ(a, b);
}
