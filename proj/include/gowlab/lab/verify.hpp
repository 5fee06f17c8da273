#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "gowlab/norms.hpp"

namespace gowlab::lab {

struct CheckResult {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string detail;
};

struct SuiteReport {
  std::string suite;
  std::uint64_t seed = 0;
  std::vector<CheckResult> checks;
  bool pass = true;
  double seconds = 0.0;
  std::size_t failures() const;
};

/// fiber-identity cube-count sigma-representation norm-methods norm-axioms
/// families selection increment bounds counterexamples
const std::vector<std::string>& suite_names();

/// Throws Error(kUsage) for an unknown suite.
SuiteReport run_verify(std::string_view suite, std::uint64_t seed = 0,
                       double budget = kDefaultTermBudget);

inline constexpr const char* kVerifySchema = "gowlab.verify/1";

/// {"schema", "suite", "seed", "pass", "seconds", "checks": [...]}.
std::string report_json(const SuiteReport& r);

}  // namespace gowlab::lab
