#pragma once

#include <cstdint>
#include <iosfwd>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

namespace scorenet::cli {

using Json = nlohmann::ordered_json;

struct RunReport {
  std::string command;
  Json config = Json::object();
  std::uint64_t seed = 0;
  Json metrics = Json::object();
  std::vector<std::string> artifacts;
  long long wall_time_ms = 0;

  Json to_json() const;
};

struct CommandResult {
  int exit_code = 0;  ///< 0 success, 1 computation error, 2 usage error
  RunReport report;
};

/// Runs one subcommand. `args` excludes the program name. The report is
/// printed to `out` as JSON on success; diagnostics go to `err`.
CommandResult run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Closest candidate by edit distance, or empty when nothing is within 3 edits.
std::string suggest(const std::string& token, const std::vector<std::string>& candidates);

}  // namespace scorenet::cli
