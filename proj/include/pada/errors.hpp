#pragma once

#include <stdexcept>
#include <string>

namespace pada {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Shape mismatch between matrices.
struct DimensionError : Error {
  using Error::Error;
};

// Out-of-range label or node id.
struct IndexError : Error {
  using Error::Error;
};

// Invalid argument or configuration value.
struct ParameterError : Error {
  using Error::Error;
};

// Operation applied to an object in the wrong state.
struct StateError : Error {
  using Error::Error;
};

// Rows that should be probability distributions are not.
struct DistributionError : Error {
  using Error::Error;
};

// All-zero class weight vector cannot be normalized.
struct DegenerateWeightsError : Error {
  using Error::Error;
};

// Non-finite loss during training; carries the failing step index.
struct DivergenceError : Error {
  DivergenceError(const std::string& msg, long step_index) : Error(msg), step(step_index) {}
  long step;
};

// Malformed text input; carries the 1-based line number when known.
struct ParseError : Error {
  explicit ParseError(const std::string& msg, long line_number = 0)
      : Error(msg), line(line_number) {}
  long line;
};

// Requested metric cannot be computed (e.g. no evaluation labels).
struct MetricError : Error {
  using Error::Error;
};

// Bad key or value in an experiment config.
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace pada
