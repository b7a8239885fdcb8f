// Error taxonomy for the toolkit.
//
// InputError and its children map to CLI exit code 2 (bad input),
// ViolationError maps to exit code 1 (a certified inequality failed,
// which indicates an implementation bug, not a user error).

#pragma once

#include <stdexcept>
#include <string>

namespace arakelov {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// -- bad user input (files, flags, parameter ranges) --------------------

struct InputError : Error {
    using Error::Error;
};

struct NotSymmetricError final : InputError {
    using InputError::InputError;
};

struct NotPositiveDefiniteError final : InputError {
    using InputError::InputError;
};

struct UnsupportedGenusError final : InputError {
    using InputError::InputError;
};

struct InvalidMerklRangeError final : InputError {
    using InputError::InputError;
};

struct InvalidInputsError final : InputError {
    using InputError::InputError;
};

struct ChartTooLargeError final : InputError {
    using InputError::InputError;
};

// -- runtime numerical conditions ----------------------------------------

struct TruncationRadiusError final : Error {
    using Error::Error;
};

struct DegenerateEstimateError final : Error {
    using Error::Error;
};

struct CoincidentPointsError final : Error {
    using Error::Error;
};

struct TooCloseToSingularityError final : Error {
    using Error::Error;
};

struct CoverageFailureError final : Error {
    using Error::Error;
};

struct SeparabilityFailureError final : Error {
    using Error::Error;
};

struct QuadratureError final : Error {
    using Error::Error;
};

struct OverflowError final : Error {
    using Error::Error;
};

// A certified inequality was observed to fail.
struct ViolationError final : Error {
    using Error::Error;
};

} // namespace arakelov
