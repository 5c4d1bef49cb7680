#pragma once

#include <stdexcept>
#include <string>

namespace cyberalloc {

// Argument outside the mathematical domain of an operation (negative spend,
// probability outside [0,1], outlays exceeding wealth, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Invalid solver or run configuration.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Unknown template or named entity.
class LookupError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

// Operation called with inputs that violate its usage contract
// (e.g. comparing allocations solved for different scenarios).
class UsageError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace cyberalloc
