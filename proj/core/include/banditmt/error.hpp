#pragma once

#include <stdexcept>
#include <string>

namespace banditmt {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A run configuration or policy parameter block is invalid. Messages carry
/// the offending field path, e.g. "policy_params.ucb.alpha: must be >= 0".
class ConfigError : public Error {
  public:
    using Error::Error;
};

/// Input data (score logs, rewards, contexts) violates its contract.
class DataError : public Error {
  public:
    using Error::Error;
};

/// Internal state is corrupted, e.g. a non-positive Sherman-Morrison
/// denominator or a negative quadratic form on a supposedly PD matrix.
class StateError : public Error {
  public:
    using Error::Error;
};

} // namespace banditmt
