#pragma once

#include <stdexcept>
#include <string>

namespace mfgp {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad argument values or inconsistent shapes.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

// A Cholesky factorization failed (matrix not numerically positive definite).
class ConditioningError : public Error {
public:
    using Error::Error;
};

// A computation produced a non-finite value.
class NumericalError : public Error {
public:
    using Error::Error;
};

// Malformed configuration or input files.
class ConfigError : public Error {
public:
    using Error::Error;
};

// A file could not be read or written.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace mfgp
