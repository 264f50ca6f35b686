#pragma once

#include <stdexcept>
#include <string>

namespace kirchhoff {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an evaluator (e.g. t < 0).
class DomainError : public Error {
public:
    using Error::Error;
};

/// An exponential argument exceeded the safe cap; never a silent infinity.
class OverflowError : public Error {
public:
    using Error::Error;
};

/// Grid spacing too coarse for the domain: no interior node.
class ResolutionError : public Error {
public:
    using Error::Error;
};

/// Linear or nonlinear iteration did not reach its tolerance.
class SolverError : public Error {
public:
    SolverError(const std::string& what, double residual)
        : Error(what), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

/// Bad configuration: unknown key, malformed value, empty sampling spec.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// The fibering ray could not be bracketed below the overflow cap.
class ProjectionError : public Error {
public:
    ProjectionError(const std::string& what, double largest_safe_t, double derivative_sign)
        : Error(what), largest_safe_t_(largest_safe_t), derivative_sign_(derivative_sign) {}
    double largest_safe_t() const noexcept { return largest_safe_t_; }
    double derivative_sign() const noexcept { return derivative_sign_; }

private:
    double largest_safe_t_;
    double derivative_sign_;
};

/// The mountain-pass probe found no negative-energy point below the cap.
class ProbeError : public Error {
public:
    using Error::Error;
};

}  // namespace kirchhoff
