#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ebeq::cli {

enum ExitCode : int {
    Verified = 0,
    UsageError = 1,
    Refuted = 2,
    AssumptionBlocked = 3,
    DegenerateChart = 4,
};

/// Runs one invocation: derive | verify | transform | oracle. Reports go to `out`,
/// diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// `name = value` lines with `#` comments.
std::vector<std::pair<std::string, std::string>> read_parameter_file(const std::string& path);

}  // namespace ebeq::cli
