#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

#include "json.hpp"

namespace ldorb {

inline constexpr const char* kReportSchema = "ldorb-report/1";

// Command-line overrides; unset fields fall back to the config.
struct CliOverrides {
  std::optional<int> precision;
  std::optional<int> height;
  std::optional<int> workers;
  std::optional<std::uint64_t> seed;
};

struct JobOutput {
  nlohmann::json report;
  std::string dot;  // stratify only
  std::string csv;  // scans only
};

// Runs one job. Throws Error on bad input and TheoremViolation on alarms.
JobOutput run_job(const nlohmann::json& config, const CliOverrides& over = {});

// Sorted keys, floats rounded to 12 significant digits, trailing newline.
std::string canonical_dump(const nlohmann::json& j);

// Reads the config, runs it and writes report.json (plus strata.dot and
// scan.csv when produced) into out_dir. Returns the exit status: 0 success,
// 1 input error, 2 theorem-violation alarm.
int run_cli(const std::string& config_path, const std::string& out_dir, const CliOverrides& over,
            std::ostream& err);

}  // namespace ldorb
