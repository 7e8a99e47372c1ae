#pragma once

#include <string>
#include <vector>

#include "eseek/engine.hpp"

namespace eseek {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct SuiteResult {
  std::string name;
  std::vector<CheckResult> checks;
  bool pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

/// Suites runnable standalone (everything except "all").
std::vector<std::string> verify_suite_names();

/// Runs one suite by name; "all" expands to every suite. Unknown names throw
/// ConfigError.
std::vector<SuiteResult> run_verify(const std::string& suite);

}  // namespace eseek
