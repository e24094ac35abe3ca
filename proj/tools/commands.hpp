#pragma once

#include <string>
#include <vector>

#include "config.hpp"

namespace loewner::cli {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode { kOk = 0, kConfigError = 2, kNumericError = 3, kStatisticalError = 4 };

struct Artifact {
  std::string name;
  std::string content;
};

struct RunOutcome {
  std::vector<Artifact> artifacts;
  int exit_code = kOk;
  std::string message;  // reason for a nonzero exit with artifacts
};

const std::vector<std::string>& command_names();

// Validates the whole configuration, computes, and returns the artifacts
// without touching the filesystem. Library errors propagate as Error.
RunOutcome run_command(const std::string& command, const Json& config);

// Exit code for a library error kind.
int exit_code_for(ErrorKind kind);

// Writes artifacts into `directory`, creating it if needed.
void write_artifacts(const std::vector<Artifact>& artifacts, const std::string& directory);

} // namespace loewner::cli
