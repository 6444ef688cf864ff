#pragma once

#include <stdexcept>
#include <string>

namespace kisched {

// Bad argument values: wrong lengths, out-of-range parameters, NaN scores.
class ParameterError : public std::invalid_argument {
public:
    explicit ParameterError(const std::string& what) : std::invalid_argument(what) {}
};

// Instance too large for an exhaustive method.
class CapacityError : public std::runtime_error {
public:
    explicit CapacityError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed file contents; message names the offending field.
class FormatError : public std::runtime_error {
public:
    explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

// A caller broke a stated precondition (e.g. fed an infeasible schedule).
class ContractError : public std::logic_error {
public:
    explicit ContractError(const std::string& what) : std::logic_error(what) {}
};

} // namespace kisched
