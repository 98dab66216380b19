#pragma once

#include <stdexcept>
#include <string>

namespace twosector {

/// Root of the library's exception hierarchy. The CLI maps each branch to an
/// exit code: ParameterError -> 1, NumericalError -> 2, ConfigError -> 3.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parameters violate a structural invariant or a balanced-growth gate.
class ParameterError : public Error {
public:
    using Error::Error;
};

class NumericalError : public Error {
public:
    using Error::Error;
};

/// A real power or logarithm was requested of a non-positive base, or a
/// share left the open unit interval.
class DomainError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Evaluation inside the u = v guard band of the CES dynamics.
class SingularityError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class BracketError : public NumericalError {
public:
    BracketError(const std::string& what, double lo, double hi)
        : NumericalError(what), lo_(lo), hi_(hi) {}
    double lo() const noexcept { return lo_; }
    double hi() const noexcept { return hi_; }

private:
    double lo_;
    double hi_;
};

class ConvergenceError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// A computed steady state failed one of its post-conditions.
class InvariantError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace twosector
