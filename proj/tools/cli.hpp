#pragma once

#include <iosfwd>

namespace divgame {

// Full command-line driver.  Returns the process exit code:
//   0 success, 2 validation error, 3 solver convergence error,
//   4 simulation configuration error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace divgame
