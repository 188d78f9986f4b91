#pragma once

#include <string>
#include <vector>

namespace socs {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;  // failure description or summary statistics
};

struct VerifyOptions {
  int max_vars = 12;
  std::uint64_t seed = 0;
  bool corrupt = false;        // test hook: injects a deliberate failure
  std::string replay_dir = ".";  // failing cases are serialized here
};

/// Runs one property suite. Suites: structural, multiply, semiring,
/// gradients, separations, reductions, or all.
std::vector<CheckResult> verify_suite(const std::string& suite, const VerifyOptions& opts);

const std::vector<std::string>& verify_suite_names();

}  // namespace socs
