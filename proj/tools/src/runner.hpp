#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include "config.hpp"
#include "report.hpp"

namespace scole::cli {

enum class Subcommand { assemble, check, scan, eigens, simulate, verify_all };

std::string_view to_string(Subcommand cmd);

/// Exit-code contract shared by every subcommand.
enum ExitCode : int {
  exit_pass = 0,
  exit_io = 1,
  exit_validation = 2,
  exit_check_failed = 3,
  exit_numerical = 4,
};

struct RunOutcome {
  int exit_code = exit_pass;
  Json report;
  /// File name to contents, report.json included.
  std::map<std::string, std::string> artifacts;
};

/// Runs the sections of a subcommand. Every section appears in the report, those
/// outside the subcommand or disabled in the config as "not run". Errors inside a
/// section are recorded in the report rather than thrown.
RunOutcome run(Subcommand cmd, const RunConfig& cfg, const std::string& config_text);

/// Writes every artifact into dir.
void emit_report(const RunOutcome& outcome, const std::filesystem::path& dir);

}  // namespace scole::cli
