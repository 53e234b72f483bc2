#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace textcast::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
    exit_ok = 0,
    exit_rejected = 1,  // validation failure, ambiguity, empty selection
    exit_usage = 2,
    exit_io = 3,
};

inline constexpr unsigned default_type_delay_ms = 80;

/// Entry point behind the `textcast` binary. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace textcast::cli
