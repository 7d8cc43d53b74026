#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace trl::cli {

enum ExitCode : int { ok = 0, usage_error = 1, data_error = 2 };

/// Runs one `timerank` command. `args` excludes the program name. Results
/// go to `out` unless a path flag redirects them; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

} // namespace trl::cli
