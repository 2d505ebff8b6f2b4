#pragma once

#include <stdexcept>

namespace finikey {

/// An argument lies outside the domain of a bound or rate formula.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// An operator or probability vector violates a state invariant.
class InvalidStateError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// No Bell-diagonal state satisfies an error-rate constraint set.
class InfeasibleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace finikey
