#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "shearlab/config.hpp"

namespace shearlab {

enum ExitCode : int { kExitOk = 0, kExitPropertyFailed = 1, kExitError = 2 };

/// Everything a run produces, held in memory until it is written.
struct RunOutcome {
  int exit_code = kExitOk;
  std::string report;
  /// (file name, contents) pairs; empty when exit_code is kExitError.
  std::vector<std::pair<std::string, std::string>> files;
};

/// Runs the configured command without touching the filesystem.
RunOutcome execute(const RunConfig& config);

/// Writes the outcome into out_dir (created if needed). On kExitError only
/// report.txt is written. Returns the exit code, or kExitError if writing fails.
int write_outcome(const RunOutcome& outcome, const std::filesystem::path& out_dir);

/// Parses `config_text`, executes it and writes the artifacts. Configuration
/// errors become exit code 2 with the diagnostic in report.txt.
int run(std::string_view config_text, const ConfigOverrides& overrides,
        const std::filesystem::path& out_dir);

}  // namespace shearlab
