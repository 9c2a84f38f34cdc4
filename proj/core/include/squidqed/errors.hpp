#pragma once

#include <stdexcept>
#include <string>

namespace squidqed {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition on shapes or dimensions was not met.
class ContractViolation : public Error {
public:
    using Error::Error;
};

/// A density operator has an eigenvalue below the allowed round-off floor.
class PositivityViolation : public Error {
public:
    using Error::Error;
};

/// Basis truncation did not converge, or an eigensolve failed.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// Time integration failed (step-size underflow, norm or positivity loss).
class IntegratorError : public Error {
public:
    IntegratorError(const std::string& what, double time)
        : Error(what + " (t = " + std::to_string(time) + ")"), time_(time) {}

    double time() const noexcept { return time_; }

private:
    double time_;
};

/// Invalid or malformed run configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace squidqed
