#pragma once

#include <stdexcept>
#include <string>

namespace orbvol {

// Bad input or a violated precondition. The CLI maps this to exit code 2.
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Arithmetic mixes elements of different fields or rings.
class FieldMismatch : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

// The stored window is too short to decide the question asked.
class PrecisionExhausted : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An enumeration guard tripped.
class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace orbvol
