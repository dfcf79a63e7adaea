#pragma once

#include <stdexcept>
#include <string>

namespace flucast {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid configuration or arguments supplied by the caller.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Input data that violates a format or domain constraint.
class DataError : public Error {
public:
    using Error::Error;
};

/// A numerical procedure could not produce a result.
class NumericalError : public Error {
public:
    using Error::Error;
};

} // namespace flucast
