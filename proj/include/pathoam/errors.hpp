#pragma once

#include <stdexcept>
#include <string>

namespace pathoam {

// Base of every error thrown by the library. The CLI maps the concrete
// subclasses onto exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class IndexError : public Error {
 public:
  using Error::Error;
};

/// Raised when the caller must transform the input first (e.g. pad it).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A label required by an element is missing from the simulation basis,
/// or a relabeling would collide.
class BasisError : public Error {
 public:
  using Error::Error;
};

/// Structural or numerical validation failure. `measured()` carries the
/// offending quantity when there is one (e.g. the unitarity defect).
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what, double measured = 0.0)
      : Error(what), measured_(measured) {}
  double measured() const noexcept { return measured_; }

 private:
  double measured_;
};

/// Malformed input document. `field()` names the offending JSON path.
class ParseError : public Error {
 public:
  ParseError(std::string field, const std::string& what)
      : Error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace pathoam
