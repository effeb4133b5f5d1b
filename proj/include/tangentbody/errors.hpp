#pragma once

#include <stdexcept>
#include <string>

#include "tangentbody/types.hpp"

namespace tangentbody {

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Coframe matrix not invertible (or badly conditioned) at the requested point.
struct SingularFrameError : Error {
    using Error::Error;
};

/// Point lies outside the frame field's chart domain.
struct OutOfChartError : Error {
    using Error::Error;
};

/// Neither analytic closures nor a finite-difference fallback can produce the
/// requested derivative.
struct DerivativeUnavailableError : Error {
    using Error::Error;
};

/// Mass points do not satisfy the center-of-mass constraint.
struct CenterOffsetError : Error {
    CenterOffsetError(const std::string& what, Vector offset_)
        : Error(what), offset(std::move(offset_)) {}
    Vector offset;
};

struct EmptyBodyError : Error {
    using Error::Error;
};

/// Body inertia tensor is not a multiple of the identity; the dynamics layer
/// only accepts isotropic bodies.
struct AnisotropicBodyError : Error {
    using Error::Error;
};

struct ShapeMismatchError : Error {
    using Error::Error;
};

struct NonConvergenceError : Error {
    using Error::Error;
};

struct TooFewSamplesError : Error {
    using Error::Error;
};

struct DimensionMismatchError : Error {
    using Error::Error;
};

struct UnknownScenarioError : Error {
    using Error::Error;
};

struct OracleUnavailableError : Error {
    using Error::Error;
};

/// Invalid run configuration; `field` names the offending entry.
struct ConfigError : Error {
    ConfigError(const std::string& what, std::string field_ = "")
        : Error(what), field(std::move(field_)) {}
    std::string field;
};

}  // namespace tangentbody
