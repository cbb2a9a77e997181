#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace heegner {

// Runs one CLI invocation. Exit codes: 0 success, 1 validation error,
// 2 computation error, 3 verify-suite failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace heegner
