#pragma once

#include <stdexcept>
#include <string>

namespace fcmreduce {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A caller broke a precondition (dimension mismatch, missing concept, ...).
class ContractViolation : public Error {
public:
    using Error::Error;
};

/// Invalid settings or configuration values, detected before any compute.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Malformed or out-of-range input file content.
class LoadError : public Error {
public:
    using Error::Error;
};

/// A random generator could not produce a valid result within its retry budget.
class GenerationError : public Error {
public:
    using Error::Error;
};

/// No admissible interaction channel exists for a tie.
class ChannelError : public Error {
public:
    using Error::Error;
};

/// A distance or statistic is undefined for the given inputs.
class UndefinedDistance : public Error {
public:
    using Error::Error;
};

}  // namespace fcmreduce
