#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "twistforge/uncertainty.hpp"

namespace twistforge {

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct RunConfig {
  std::string preset;      // iso2 | iso11 | canonical, or empty
  std::string twist_case;  // i | ii, or empty
  std::string twist = "simplified";  // simplified | generic
  std::map<std::string, std::string> parameters;  // name -> expression
  int order = 4;
  std::string variant = "corrected";  // corrected | printed
  std::vector<std::string> checks;    // empty: every applicable check
  std::string generator = "P1";
  GridSettings grid;
  StateSampler states;
  double hbar = 1.0;
  std::vector<double> scan_centers;
  double scan_sigma = 0.2;
  std::string format = "text";  // json | text | csv
  std::string output;           // empty: stdout
};

/// Strict: unknown keys, wrong types and out-of-range values throw ConfigError
/// naming the key.
RunConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const RunConfig& c);

struct CommandResult {
  int exit_code = 0;  // 0 pass, 1 check failed, 2 invalid input
  std::string output;
  std::string error;
};

CommandResult cmd_derive(const RunConfig& c);
CommandResult cmd_check(const RunConfig& c);
CommandResult cmd_uncertainty(const RunConfig& c);
CommandResult cmd_expand(const RunConfig& c);
/// Dispatch by subcommand name.
CommandResult run_command(const std::string& name, const RunConfig& c);

}  // namespace twistforge
