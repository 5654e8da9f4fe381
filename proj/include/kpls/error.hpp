#pragma once

#include <stdexcept>
#include <string>

namespace kpls {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed arguments: shape mismatches, out-of-range parameters, non-finite data.
class InputError : public Error {
public:
    using Error::Error;
};

/// A computation produced a value outside its admissible range (e.g. a negative norm).
class NumericalError : public Error {
public:
    using Error::Error;
};

/// A Krylov basis lost rank before the requested dimension.
class RankError : public Error {
public:
    using Error::Error;
};

/// A covariance matrix stayed indefinite after the maximal diagonal jitter.
class SpectrumError : public Error {
public:
    SpectrumError(const std::string& what, double smallest_eigenvalue)
        : Error(what), smallest_eigenvalue_(smallest_eigenvalue) {}

    double smallest_eigenvalue() const noexcept { return smallest_eigenvalue_; }

private:
    double smallest_eigenvalue_;
};

/// A statistic is undefined for the given data (e.g. ACF of a constant series).
class DegenerateError : public Error {
public:
    using Error::Error;
};

/// An evaluator returned a non-finite value during quadrature.
class EvaluationError : public Error {
public:
    using Error::Error;
};

/// An experiment configuration violates its invariants.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace kpls
