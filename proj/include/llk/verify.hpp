#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "llk/report.hpp"

namespace llk {

/// One assertion: `measured` compared against `bound` with `comparison`
/// ("<=", ">=", "<" or ">"); `detail` says what was measured.
struct CheckResult {
  std::string name;
  double measured = 0.0;
  std::string comparison = "<=";
  double bound = 0.0;
  bool pass = false;
  std::string detail;
};

struct SuiteResult {
  std::string name;
  std::vector<CheckResult> checks;
  bool passed() const;
};

struct VerifyReport {
  std::uint64_t seed = 0;
  std::vector<SuiteResult> suites;

  bool passed() const;
  std::size_t check_count() const;
  std::size_t failure_count() const;
  /// {"suites": [{"name", "passed", "checks": [...]}], "summary": {...}}
  Json to_json() const;
};

/// gradcheck, identities, canonical, estimators, divergences, scoring.
std::span<const std::string_view> suite_names();

/// Runs one suite, or every suite in name order for "all". Throws
/// DomainError for an unknown suite name.
VerifyReport run_verify(std::string_view suite, std::uint64_t seed);

SuiteResult run_gradcheck_suite(std::uint64_t seed);
SuiteResult run_identities_suite(std::uint64_t seed);
SuiteResult run_canonical_suite(std::uint64_t seed);
SuiteResult run_estimators_suite(std::uint64_t seed);
SuiteResult run_divergences_suite(std::uint64_t seed);
SuiteResult run_scoring_suite(std::uint64_t seed);

}  // namespace llk
