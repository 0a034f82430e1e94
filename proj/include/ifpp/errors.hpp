#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ifpp {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A point or probability lies outside the domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The operation does not apply to this density kind (e.g. a 1D CDF of a 2D model).
class KindError : public Error {
 public:
  using Error::Error;
};

/// A constructor or operation received an out-of-range parameter.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// The requested operation is not supported by the map's structure.
class CapabilityError : public Error {
 public:
  using Error::Error;
};

/// A density has no mass to normalize.
class NormalizationError : public Error {
 public:
  using Error::Error;
};

/// Malformed text or binary input. `line` is 1-based (0 when unknown);
/// `column` is a 0-based character offset (used by the map-spec parser).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0, std::size_t column = 0)
      : Error(what), line_(line), column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace ifpp
