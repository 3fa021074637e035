#pragma once

#include <stdexcept>
#include <string>

namespace qfisher {

/// A precondition on caller-supplied input was violated (bad grid, non-lattice
/// shift, unknown state name). The CLI maps this to exit code 2.
class invalid_argument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The inputs were well-formed but a numerical validation failed (mass lost
/// off-grid, excessive low-density exclusion, non-zero mean momentum).
/// The CLI maps this to exit code 1.
class numerical_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace qfisher
