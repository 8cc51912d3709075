#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace evbench {

/// Base class of every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file; `line()` is 1-based, 0 when the input is binary.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A value outside its admissible domain (pixel coordinates, timestamps order, ...).
class RangeError : public Error {
 public:
  using Error::Error;
};

/// Geometry too weak to determine the requested quantity.
class DegenerateGeometryError : public Error {
 public:
  using Error::Error;
};

/// Estimate and ground truth do not share any time span.
class NoOverlapError : public Error {
 public:
  NoOverlapError() : Error("no temporal overlap") {}
  using Error::Error;
};

}  // namespace evbench
