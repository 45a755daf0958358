#pragma once

// Command dispatch behind kinder-cli and the Python module. Every command
// returns a JSON report {schema, version, config, results, timing_ms}.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace kinder {

inline constexpr const char* kReportSchema = "kinder-report";
inline constexpr const char* kReportVersion = "1.0";

struct RunConfig {
  std::string command;
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> trials;
  std::size_t cap_subgroups = 2048;
  std::size_t cap_iso = 512;
  std::string mode;      // e.g. exhaustive | estimate
  std::string out_path;  // empty: stdout
  unsigned workers = 0;

  nlohmann::ordered_json echo() const;
};

std::vector<std::string> command_names();

// Throws the kinder error types; see exit_code_for.
nlohmann::ordered_json run_command(const RunConfig& cfg);

// 0 ok, 2 invalid config or malformed input, 3 cap exceeded,
// 4 property violation, 5 a verification failed, 1 anything else.
enum ExitCode : int { kExitOk = 0, kExitOther = 1, kExitInvalid = 2, kExitCap = 3, kExitProperty = 4, kExitFailed = 5 };
int exit_code_for(const std::exception& ex);

// A report's results may ask for a nonzero exit (failed verification).
int exit_code_for_report(const nlohmann::ordered_json& report);

}  // namespace kinder
