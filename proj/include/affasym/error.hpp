#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace affasym {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A mathematical operation was evaluated outside its domain (division by a
/// degenerate jet, fourth root at a parabolic point, point outside a surface
/// domain, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The input to an operation does not satisfy a stated precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// User configuration is invalid (bad catalog parameters, tolerances, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t offset)
      : Error(message + " at offset " + std::to_string(offset)), offset_(offset) {}

  /// 1-based byte column of the offending character (length + 1 at end of input).
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace affasym
