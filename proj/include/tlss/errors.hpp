#pragma once

#include <stdexcept>
#include <string>

namespace tlss {

/// Argument outside the mathematical domain of an operation (non-finite input,
/// probability outside (0,1), non-positive scale, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Derivative requested at a non-differentiable point (the Laplace kink).
class SingularityError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Moment or generating function that does not exist for the kernel.
class MomentError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Moment series requested outside the shape range where it converges.
class SeriesRangeError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Observation outside the support of a model.
class SupportError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Finite-difference stencil hit a non-finite log-likelihood.
class StencilError : public std::runtime_error {
public:
    StencilError(const std::string& what, int direction)
        : std::runtime_error(what), direction_(direction) {}

    int direction() const noexcept { return direction_; }

private:
    int direction_;
};

/// Malformed or missing dataset file.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what, int line = 0)
        : std::runtime_error(what), line_(line) {}

    /// 1-based line number of the offending row, 0 when not line-specific.
    int line() const noexcept { return line_; }

private:
    int line_;
};

} // namespace tlss
