#pragma once

#include <stdexcept>
#include <string>

namespace radlab {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Inputs violate a documented precondition or invariant (bad config, wrong regime).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// The particle would turn around, or kinetic dominance / WKB validity fails.
class RegimeError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// Query outside a function's domain, or a violated operation precondition.
class DomainError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// A sampled signal does not reach its declared support tolerance inside the window.
class SupportError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// Wavenumber grid is not symmetric about zero.
class GridError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// Emission probability requested down to k = 0 while a(0) != 0.
class InfraredError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// A numerical kernel could not deliver the requested accuracy.
class NumericalError : public Error {
public:
    using Error::Error;
};

class StepSizeError : public NumericalError {
public:
    StepSizeError(const std::string& what, double time)
        : NumericalError(what + " at t = " + std::to_string(time)), time_(time) {}
    double time() const noexcept { return time_; }

private:
    double time_;
};

class QuadratureError : public NumericalError {
public:
    QuadratureError(const std::string& what, double estimate, double error_bound)
        : NumericalError(what + " (estimate " + std::to_string(estimate) + ", error bound " +
                         std::to_string(error_bound) + ")"),
          estimate_(estimate), error_bound_(error_bound) {}
    double estimate() const noexcept { return estimate_; }
    double error_bound() const noexcept { return error_bound_; }

private:
    double estimate_;
    double error_bound_;
};

/// Sample grid too coarse for the requested wavenumber.
class ResolutionError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace radlab
