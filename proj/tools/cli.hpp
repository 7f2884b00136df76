#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rlie::cli {

/// Exit codes: 0 success, 1 computed value differs from an expectation or a
/// check fails, 2 usage or input error.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rlie::cli
