#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace featsel::cli {

enum ExitCode : int { ok = 0, usage_error = 1, data_error = 2 };

/// Runs one CLI invocation. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace featsel::cli
