#pragma once

#include <stdexcept>
#include <string>

namespace certilab {

/// Malformed arguments or inputs that violate a documented precondition.
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A property that must hold by construction was observed to fail.
class InvariantViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// A computation exceeded one of its hard resource caps.
class CapacityExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline void require(bool ok, const std::string& what)
{
    if (!ok) throw InvalidInput(what);
}

inline void ensure(bool ok, const std::string& what)
{
    if (!ok) throw InvariantViolation(what);
}

} // namespace certilab
