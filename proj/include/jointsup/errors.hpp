#pragma once

#include <stdexcept>
#include <string>

namespace jointsup {

/// A caller-supplied value is outside the operation's domain. `field()` names
/// the offending parameter so front ends can report it verbatim.
class ValidationError : public std::invalid_argument {
public:
    ValidationError(std::string field, const std::string& message)
        : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// A formula produced a value that cannot be explained by rounding
/// (probability outside [0, 1] by more than the clamp tolerance, non-finite
/// intermediate, ...).
class NumericalIntegrityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Signed log-domain summation lost all significant digits.
class CancellationError : public NumericalIntegrityError {
public:
    using NumericalIntegrityError::NumericalIntegrityError;
};

}  // namespace jointsup
