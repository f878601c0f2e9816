#pragma once

#include <stdexcept>
#include <string>

namespace lpnse {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Grid or plan mismatch between operands.
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

/// Spectral data that is not the transform of a real field.
class SymmetryError : public Error {
 public:
  using Error::Error;
};

/// Out-of-range exponent, order or other numeric parameter.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Quantity undefined for the given input (e.g. a ratio with a zero denominator).
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

class NonFiniteError : public Error {
 public:
  using Error::Error;
};

class InvalidProfileError : public Error {
 public:
  using Error::Error;
};

/// Config file problem; carries the 1-based line number (0 when not tied to a line).
class ParseError : public Error {
 public:
  ParseError(const std::string& message, int line)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + message : message),
        line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace lpnse
