#pragma once

#include <stdexcept>
#include <string>

namespace divgame {

// Bad parameters, bad inputs, violated preconditions.  CLI exit code 2.
struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A solver failed to meet its own tolerance.  Carries diagnostics in the
// message.  CLI exit code 3.
struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Non-finite state during an integration.  Should be unreachable with the
// mollified dynamics, so it signals a bug rather than bad input.  CLI exit
// code 3.
struct BlowupError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Inconsistent simulation setup (e.g. a drift kernel together with
// kappa = 0, where the entropy penalty is undefined).  CLI exit code 4.
struct SimConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

}  // namespace divgame
