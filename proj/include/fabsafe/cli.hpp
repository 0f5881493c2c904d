#pragma once

// Command-line front end. Exit codes: 0 success / fulfilled, 1 usage, I/O or
// model-resolution error, 2 validation violations (including strict-mode
// findings), 3 infeasible match, unfulfilled verdict, refused approval, or
// missing capability. Reports go to stdout, diagnostics to stderr.

#include <iosfwd>
#include <string>
#include <vector>

namespace fabsafe {

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fabsafe
