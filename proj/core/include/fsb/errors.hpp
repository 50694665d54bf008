#pragma once

#include <stdexcept>
#include <string>

namespace fsb {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A point lies outside the domain of a divergence, density, or weight.
class DomainError : public Error {
public:
    using Error::Error;
};

/// An integrand returned NaN or infinity at an interior abscissa.
class EvaluationError : public Error {
public:
    EvaluationError(const std::string& what, double abscissa)
        : Error(what), abscissa_(abscissa) {}
    double abscissa() const noexcept { return abscissa_; }

private:
    double abscissa_;
};

/// A density whose normalizing integral does not converge.
class NonIntegrableError : public Error {
public:
    using Error::Error;
};

/// Requested functionality is not defined for the given configuration
/// (e.g. a weight family that cannot be shifted to vanish at infinity).
class UnsupportedError : public Error {
public:
    using Error::Error;
};

/// Evaluation at a singular point of a weight function.
class SingularityError : public Error {
public:
    using Error::Error;
};

}  // namespace fsb
