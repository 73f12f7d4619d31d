#pragma once

#include <stdexcept>

namespace hlslab {

/// Inconsistent grid, cutoff or run configuration.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A documented precondition of an operation does not hold.
struct PreconditionError : std::logic_error {
    using std::logic_error::logic_error;
};

}  // namespace hlslab
