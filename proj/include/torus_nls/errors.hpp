#pragma once

#include <stdexcept>
#include <string>

namespace tnls {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Caller supplied bad input (maps to CLI exit code 2).
struct UsageError : Error {
    using Error::Error;
};

// Something went wrong numerically (maps to CLI exit code 3).
struct NumericalError : Error {
    using Error::Error;
};

struct NegativePowerAtZeroMode : UsageError {
    NegativePowerAtZeroMode() : UsageError("negative homogeneous power applied to a nonzero zero mode") {}
};

struct GridTooSmall : UsageError {
    GridTooSmall(int n, int M)
        : UsageError("grid of " + std::to_string(n) + " points per axis cannot resolve bandlimit " +
                     std::to_string(M)) {}
};

struct UndefinedDerivative : UsageError {
    using UsageError::UsageError;
};

struct DomainError : NumericalError {
    using NumericalError::NumericalError;
};

struct InvalidLebesgueExponent : UsageError {
    explicit InvalidLebesgueExponent(double q)
        : UsageError("Lebesgue exponent " + std::to_string(q) + " outside [1, 3/2)") {}
};

struct GridMismatch : UsageError {
    using UsageError::UsageError;
};

struct EpsilonTooLarge : UsageError {
    EpsilonTooLarge(std::string c, double v) : UsageError("epsilon too large: " + c), constraint(std::move(c)), value(v) {}
    std::string constraint;
    double value;
};

struct SamplerDegenerate : NumericalError {
    using NumericalError::NumericalError;
};

struct GuardExceeded : NumericalError {
    using NumericalError::NumericalError;
};

struct DegenerateSeries : NumericalError {
    using NumericalError::NumericalError;
};

struct NotFound : UsageError {
    explicit NotFound(const std::string& what) : UsageError("not found: " + what) {}
};

struct ConfigError : UsageError {
    ConfigError(std::string k, const std::string& msg) : UsageError(k.empty() ? msg : k + ": " + msg), key(std::move(k)) {}
    std::string key;
};

}  // namespace tnls
