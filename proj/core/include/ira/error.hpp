#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ira {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shape or dimension disagreement between two operands.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A NaN or infinity reached a place where training has to stop.
class NonFiniteError : public Error {
 public:
  using Error::Error;
};

/// Misuse of an environment episode (stepping after it ended, bad action).
class EpisodeError : public Error {
 public:
  using Error::Error;
};

/// A query against a buffer that holds nothing to retrieve.
class EmptyBufferError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Training aborted; carries the environment step at which it happened.
class TrainingAborted : public Error {
 public:
  TrainingAborted(std::int64_t step, const std::string& what)
      : Error("training aborted at step " + std::to_string(step) + ": " + what), step_(step) {}

  std::int64_t step() const noexcept { return step_; }

 private:
  std::int64_t step_;
};

}  // namespace ira
