#pragma once

#include <stdexcept>
#include <string>

namespace gravattn {

/// Base class for every error raised by the library. The CLI maps the
/// concrete subclasses onto process exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid parameters or a violated precondition on the caller side.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Unreadable, missing or malformed input data.
class DataError : public Error {
public:
    using Error::Error;
};

/// Numerical failure inside a solver (e.g. step-size underflow).
class NumericError : public Error {
public:
    using Error::Error;
};

}  // namespace gravattn
