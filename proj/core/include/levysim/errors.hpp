#pragma once

#include <stdexcept>
#include <string>

namespace levysim {

/// Base class for all levysim errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A requested untruncated moment diverges for the given measure family.
struct InfiniteMomentError : Error {
    using Error::Error;
};

/// No jump mass at or below the truncation level: the fourth-to-second
/// truncated moment ratio is undefined and Gaussian compensation must be
/// skipped by the caller.
struct DegenerateSmallJumpsError : Error {
    using Error::Error;
};

/// The normalized tail law has zero mass above the truncation level.
struct EmptyTailError : Error {
    using Error::Error;
};

/// Exact increment simulation requested for an infinite-activity measure.
struct InfiniteActivityError : Error {
    using Error::Error;
};

struct InsufficientIncrementsError : Error {
    using Error::Error;
};

struct GridMismatchError : Error {
    using Error::Error;
};

struct EmptyCdfError : Error {
    using Error::Error;
};

struct EmptyInputError : Error {
    using Error::Error;
};

/// The small-jump sum cannot be simulated exactly (infinite activity below
/// the truncation level) and no inner-truncation layer was requested.
struct FiniteSmallActivityError : Error {
    using Error::Error;
};

/// An experiment precondition on the driving measure is violated.
struct HypothesisViolationError : Error {
    using Error::Error;
};

/// Malformed or inconsistent experiment configuration.
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace levysim
