#pragma once

#include <stdexcept>
#include <string>

namespace vqi {

// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Operands have incompatible dimensions.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// A subsystem label was not found, or labels collide.
class LabelError : public Error {
 public:
  using Error::Error;
};

// A numeric parameter is outside its documented range.
class RangeError : public Error {
 public:
  using Error::Error;
};

// A matrix expected to be Hermitian is not, within tolerance.
class SymmetryError : public Error {
 public:
  using Error::Error;
};

// A conditional operation was scheduled before its classical record is
// available at the acting party.
class CausalityError : public Error {
 public:
  using Error::Error;
};

// The execution state is inconsistent with the event (unprepared system,
// non-unitary operator, missing correction entry, ...).
class StateError : public Error {
 public:
  using Error::Error;
};

// A timeline failed static validation.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A scenario or report file could not be parsed or validated.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace vqi
