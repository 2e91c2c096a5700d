#pragma once

#include <stdexcept>
#include <string>

namespace boxroot {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// 0 is contained in the divisor interval.
struct DivisionByZeroInterval : Error {
    using Error::Error;
};

// Evaluation left the domain of an expression (e.g. zero-containing denominator).
struct DomainError : Error {
    using Error::Error;
};

struct SyntaxError : Error {
    using Error::Error;
};

struct DimensionMismatch : Error {
    using Error::Error;
};

struct UnknownFunction : Error {
    using Error::Error;
};

struct MaxDepthExceeded : Error {
    using Error::Error;
};

// Elimination found no usable pivot, or the inverse residual stayed >= 1
// after the precision-escalation limit.
struct SingularToWorkingPrecision : Error {
    using Error::Error;
};

struct PrecisionCeilingExceeded : Error {
    using Error::Error;
};

// A root enclosure could not be certified nonsingular.
struct SingularEnclosure : Error {
    using Error::Error;
};

struct UnsupportedDimension : Error {
    using Error::Error;
};

} // namespace boxroot
