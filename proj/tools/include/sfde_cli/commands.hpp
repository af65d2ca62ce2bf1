#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "sfde_cli/run_config.hpp"

namespace sfde::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitDivergence = 3;
inline constexpr int kExitDiagnostic = 4;

/// Executes a resolved command. Primary output goes to `out` (the caller resolves the output
/// path); a JSON summary is also written to cfg.summary when set. Returns the exit code for
/// successful runs (0, or 4 when a diagnostic fails); errors propagate as exceptions.
int run_command(const RunConfig& cfg, std::ostream& out);

/// Full command line entry point: parses arguments, resolves the config, opens output files and
/// maps errors to exit codes. Diagnostics go to `err`; "-" as output means `out`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sfde::cli
