#pragma once

#include <stdexcept>
#include <string>

namespace ulab {

// Bad user input: unparsable expression, unknown key, malformed config.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& m) : std::runtime_error(m) {}
};

// A numeric routine could not deliver its contract (divergent integral,
// overflow, step-size underflow).
struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& m) : std::runtime_error(m) {}
};

// An operation was called outside its stated precondition.
struct PreconditionError : std::runtime_error {
    explicit PreconditionError(const std::string& m) : std::runtime_error(m) {}
};

}  // namespace ulab
