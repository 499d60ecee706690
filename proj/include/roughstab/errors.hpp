#pragma once

#include <stdexcept>
#include <string>

namespace roughstab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidDimension : public Error {
public:
    using Error::Error;
};

class InvalidPartition : public Error {
public:
    using Error::Error;
};

class EmptyPath : public Error {
public:
    using Error::Error;
};

class InvalidParameter : public Error {
public:
    using Error::Error;
};

class IndexOutOfRange : public Error {
public:
    using Error::Error;
};

class InvalidInterval : public Error {
public:
    using Error::Error;
};

/// Evaluation point outside the declared domain of a scalar function.
class DomainError : public Error {
public:
    using Error::Error;
};

/// NaN or infinity produced by a vector field or a finite difference.
class NumericalFailure : public Error {
public:
    using Error::Error;
};

/// A trajectory left the configured bounding box.
class BlowUp : public Error {
public:
    BlowUp(const std::string& what, double time) : Error(what), time_(time) {}

    /// First sampling instant at which the state was outside the box.
    double time() const noexcept { return time_; }

private:
    double time_;
};

/// Malformed scenario or CLI configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace roughstab
