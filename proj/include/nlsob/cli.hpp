#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nlsob {

/// Exit codes of the command line tool.
enum ExitCode : int { kExitOk = 0, kExitValidation = 1, kExitNumerical = 2 };

/// Runs the tool on args (without the program name). Reports go to out unless
/// --out is given; diagnostics and usage go to err.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nlsob
