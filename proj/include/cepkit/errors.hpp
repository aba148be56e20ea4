#pragma once

#include <stdexcept>
#include <string>

namespace cepkit {

/// Bad simulator/noise configuration (schema, invariants, parameter ranges).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent data passed between pipeline stages.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Filesystem-level failure (missing input, unwritable output).
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace cepkit
