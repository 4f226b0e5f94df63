#pragma once

#include <stdexcept>
#include <string>

namespace dbfrx {

/// Input that violates a documented contract (bad config, mismatched shapes).
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Internal consistency check failed. Indicates a bug, not bad input.
class InvariantViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace dbfrx
