#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace s2paths::cli {

enum ExitCode : int { ok = 0, config_error = 2, numerical_error = 3 };

// Runs one command line (without the program name). Output files go to
// --out, else $S2PATHS_OUTPUT_DIR, else the working directory.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace s2paths::cli
