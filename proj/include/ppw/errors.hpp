#pragma once

#include <stdexcept>
#include <string>

namespace ppw {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument lies outside the supported evaluation range.
class RangeError : public Error {
public:
    using Error::Error;
};

/// A numerical procedure failed to bracket, converge or stay finite.
class NumericError : public Error {
public:
    using Error::Error;
};

/// A documented precondition of an operation was violated by the caller.
class ContractError : public Error {
public:
    using Error::Error;
};

/// The requested object does not exist (e.g. no ball matches a target eigenvalue).
class NoSolutionError : public Error {
public:
    NoSolutionError(const std::string& what, double limit_estimate)
        : Error(what), limit_estimate_(limit_estimate) {}

    double limit_estimate() const noexcept { return limit_estimate_; }

private:
    double limit_estimate_;
};

} // namespace ppw
