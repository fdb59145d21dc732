#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace trackctl::cli {

/// Exit codes shared by every command.
enum ExitCode : int {
    exit_ok = 0,          ///< success
    exit_assumption = 1,  ///< a model assumption or numeric contract is violated
    exit_infeasible = 2,  ///< tolerance verdict negative / search exhausted
    exit_io = 3,          ///< bad flags, unreadable config, or write failure
};

/// Run one command line (program name excluded). Primary output goes to
/// `out` unless --output redirects it to a file; diagnostics go to `err`.
/// Returns the process exit code.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace trackctl::cli
