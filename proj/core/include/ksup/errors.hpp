#pragma once

#include <stdexcept>

namespace ksup {

/// Invalid arguments or configuration supplied by the caller.
struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// File access failures and malformed input files.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Numeric failure: solver divergence, or an internal condition that cannot
/// fail for finite inputs (signals corrupted state).
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace ksup
