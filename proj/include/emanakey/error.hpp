#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace emanakey {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller passed a value outside an operation's domain (wrong bit count,
/// sample rate too low, out-of-range preset field, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Stuffed bit stream holds a run of seven '1' bits.
class MalformedStream : public Error {
 public:
  using Error::Error;
};

/// SE0 found where a J/K data symbol was required.
class FramingError : public Error {
 public:
  using Error::Error;
};

/// All-zero or otherwise unusable input to normalization.
class DegenerateInput : public Error {
 public:
  using Error::Error;
};

/// Detector found no usable edge peaks. Kept apart from a low-score
/// classification so sweeps can count channel failures separately.
class NoSignal : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Wrong magic or otherwise unrecognized file layout.
class FormatError : public Error {
 public:
  using Error::Error;
};

class TruncatedFile : public Error {
 public:
  using Error::Error;
};

class VersionMismatch : public Error {
 public:
  using Error::Error;
};

/// Text input could not be parsed; carries the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace emanakey
