#pragma once

#include <stdexcept>
#include <string>

namespace solitonlab {

/// Evaluation point or argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A checked precondition failed; carries the measured violation.
class PreconditionError : public std::runtime_error {
public:
    PreconditionError(const std::string& what, double residual)
        : std::runtime_error(what), residual_(residual) {}

    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

/// Requested behaviour is not defined for this input (e.g. non-canonical family).
class UnsupportedError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Malformed user input: bad job files, too few samples, unknown names.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace solitonlab
