#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace alignkit {

/// Base class of every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file or stream. Carries the 1-based line number when known.
class FormatError : public Error {
 public:
  FormatError(const std::string& what, std::size_t line = 0)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class EncodingError : public Error {
 public:
  using Error::Error;
};

/// A sentence pair with an empty side.
class DegeneratePairError : public Error {
 public:
  using Error::Error;
};

/// Alignments (or other inputs) whose sentence dimensions disagree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Zero, negative or non-finite probability mass where a distribution was required.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Invalid hyperparameters or configuration values.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A file could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace alignkit
