#pragma once

#include <stdexcept>
#include <string>

namespace helioseis {

/// Root of the exception hierarchy. The CLI maps ValidationError to exit
/// status 2 and NumericalError to exit status 3.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

class NumericalError : public Error {
public:
    using Error::Error;
};

class SchemaError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class DomainError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// Thrown when d/dr (r / c(r)) fails to be positive somewhere on the check grid.
class HerglotzViolation : public ValidationError {
public:
    HerglotzViolation(const std::string& what, double radius, double margin)
        : ValidationError(what), radius_(radius), margin_(margin) {}

    double radius() const noexcept { return radius_; }
    double margin() const noexcept { return margin_; }

private:
    double radius_;
    double margin_;
};

/// Momentum outside the window of the requested regime.
class RegimeError : public DomainError {
public:
    using DomainError::DomainError;
};

class QuadratureError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class RootNotFound : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Orbit continuation failed; `last_good_tau` is the last parameter reached.
class TrackingError : public NumericalError {
public:
    TrackingError(const std::string& what, double last_good_tau)
        : NumericalError(what), last_good_tau(last_good_tau) {}
    double last_good_tau;
};

} // namespace helioseis
