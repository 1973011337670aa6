#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "signpipe/cli/config.hpp"

namespace signpipe::cli {

inline constexpr std::string_view kToolVersion = "0.1.0";

inline constexpr int kExitOk = 0;
inline constexpr int kExitDataError = 1;
inline constexpr int kExitUsageError = 2;

/// Subcommand id ("kb.build", "resolve", ...) to its config schema.
const std::map<std::string, Schema>& schemas();

/// Whole command line minus argv[0]. Never throws; returns the exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, char** argv);

}  // namespace signpipe::cli
