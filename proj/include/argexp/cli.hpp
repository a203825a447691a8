#pragma once

#include <ostream>

namespace argexp {

/// Entry point of the `argexp` tool. Human-readable summaries go to `out`,
/// diagnostics to `err`. Returns the process exit code: 0 success, 2 input
/// error, 3 query error, 4 internal-consistency error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace argexp
