#pragma once

// The acceptance checks, shared by the test binary, `kinder-cli verify-suite`
// and the Python module.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace kinder {

enum class Tier { Fast, Full };

struct CriterionResult {
  std::string id;
  std::string title;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

struct SuiteOptions {
  Tier tier = Tier::Fast;
  unsigned workers = 0;
  std::uint64_t seed = 20260101;
  // Re-verifies a certificate (JSON text) in a fresh process. When empty the
  // certificate is re-parsed and verified in-process.
  std::function<bool(const std::string& cert_json, std::uint32_t e)> fresh_verify;
};

// "1" .. "13" and "subspace-counts".
std::vector<std::string> criterion_ids();
CriterionResult run_criterion(const std::string& id, const SuiteOptions& opts);
std::vector<CriterionResult> run_suite(const SuiteOptions& opts,
                                       const std::vector<std::string>& only = {});

}  // namespace kinder
