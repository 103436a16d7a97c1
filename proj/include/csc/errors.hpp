#pragma once

#include <stdexcept>
#include <string>

namespace csc {

// Base class for all errors raised by this library.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// A dictionary column has (numerically) zero norm and cannot be normalized.
struct ZeroAtomError : Error {
    using Error::Error;
};

// Operand shapes are inconsistent with the model dimensions.
struct DimensionMismatchError : Error {
    using Error::Error;
};

// A shift or coefficient index lies outside the valid range.
struct IndexOutOfRangeError : Error {
    using Error::Error;
};

// The requested dense computation exceeds the configured size guard.
struct TooLargeError : Error {
    using Error::Error;
};

// A restricted subsystem is numerically rank deficient.
struct RankDeficientError : Error {
    using Error::Error;
};

// A configuration or specification value is invalid.
struct SpecInvalidError : Error {
    using Error::Error;
};

// An experiment plan file is malformed or inconsistent.
struct PlanInvalidError : Error {
    using Error::Error;
};

// A required result file is missing from an experiment directory.
struct MissingArtifactError : Error {
    using Error::Error;
};

// A file could not be read, written, or parsed.
struct IoError : Error {
    using Error::Error;
};

}  // namespace csc
