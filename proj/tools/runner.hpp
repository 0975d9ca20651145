#pragma once

// Subcommands of the batch driver. Each returns a JSON report whose checks
// carry a residual, the tolerance it was held to and a pass/fail status.

#include <string>

#include <nlohmann/json.hpp>

#include "config.hpp"

namespace maba::cli {

enum class Command { verify, spectrum, solve, overlap, norm };

// Throws ConfigError for an unknown name.
Command parse_command(const std::string& name);
const char* to_string(Command cmd);

struct RunResult {
  nlohmann::json report;
  bool ok = true;  // every check passed
};

// Library errors are caught and reported as a failing check named after the
// stage that raised them.
RunResult execute(Command cmd, const RunConfig& cfg);

// 15 significant digits.
double round15(double x);

}  // namespace maba::cli
