#pragma once

#include <stdexcept>
#include <string>

namespace glv {

// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct DimensionMismatch : Error {
    using Error::Error;
};

struct SingularMatrix : Error {
    using Error::Error;
};

struct NotSkewSymmetric : Error {
    using Error::Error;
};

struct CannotComplete : Error {
    using Error::Error;
};

// Argument outside the admissible domain (e.g. a state off the positive orthant).
struct DomainError : Error {
    using Error::Error;
};

// System/file data violating a structural invariant (rank of B, sizes, ...).
struct InvalidSystem : Error {
    using Error::Error;
};

struct NotDecoupledForm : Error {
    using Error::Error;
};

struct InsufficientDegeneracy : Error {
    using Error::Error;
};

struct InvalidFactorization : Error {
    using Error::Error;
};

struct ChartMismatch : Error {
    using Error::Error;
};

struct BlowUp : Error {
    using Error::Error;
};

struct StepUnderflow : Error {
    using Error::Error;
};

struct ParseError : Error {
    using Error::Error;
};

} // namespace glv
