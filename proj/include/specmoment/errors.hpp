#pragma once

#include <stdexcept>
#include <string>

namespace specmoment {

// Base class for all failures raised by this library.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Evaluation requested outside a function's domain of analyticity.
struct DomainError : Error { using Error::Error; };

// No evaluation route admits the given model/test-function pair.
struct NoValidRoute : Error { using Error::Error; };

// An adaptive or iterative scheme hit its budget before reaching tolerance.
struct ToleranceNotMet : Error { using Error::Error; };

// Scale parameter of a shifted/scaled test function must be positive.
struct InvalidScale : Error { using Error::Error; };

// Quadrature or derivative order outside the supported range.
struct OrderOutOfRange : Error { using Error::Error; };

// The model stores no pointwise density (correlation-only model).
struct NoDensity : Error { using Error::Error; };

// Contour parameters violate rho1 < 1 < rho2 or leave the annulus of analyticity.
struct InvalidAnnulus : Error { using Error::Error; };

}  // namespace specmoment
