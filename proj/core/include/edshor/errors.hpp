#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace edshor {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands belong to different fields (or have the wrong length).
class SpecMismatch : public Error {
 public:
  using Error::Error;
};

/// Invalid field, curve or circuit parameters.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A denominator of the Edwards addition law vanished. On a curve with
/// d1 != 0 and Tr(d2) = 1 this never happens; seeing it is a bug.
class CompletenessViolation : public Error {
 public:
  using Error::Error;
};

/// Refused because the request exceeds a hard size limit.
class ResourceLimit : public Error {
 public:
  using Error::Error;
};

class NotFound : public Error {
 public:
  using Error::Error;
};

/// A gate the basis-state simulator cannot execute (H, CPHASE).
class UnsupportedGate : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& reason)
      : Error("line " + std::to_string(line) + ": " + reason), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace edshor
