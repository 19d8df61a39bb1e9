#pragma once

#include <stdexcept>
#include <string>

namespace dualfair {

/// Base class for all errors raised by this library.  Every more specific
/// error below derives from it, so callers can catch the whole family with
/// one handler while tests pin down the exact condition.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Input could not be parsed at all (malformed JSON, bad rational literal,
/// unknown enum value).
class FormatError : public Error {
 public:
  explicit FormatError(const std::string& what) : Error(what) {}
};

/// Input parsed but violates a structural rule (dimension mismatch, negative
/// value, a declared matrix tag the entries do not satisfy, an allocation
/// that is not a partition of the items).
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what) : Error(what) {}
};

/// A solver was invoked on an instance outside its supported class
/// (e.g. a two-agent routine on three agents, a bi-valued routine on a
/// general matrix).
class UnsupportedInstance : public Error {
 public:
  explicit UnsupportedInstance(const std::string& what) : Error(what) {}
};

/// An enumeration would exceed the configured work cap.
class CapExceeded : public Error {
 public:
  explicit CapExceeded(const std::string& what) : Error(what) {}
};

/// The dynamic program's reachable state set grew past its configured cap,
/// or its agent-count guard was violated.
class StateSpaceExceeded : public Error {
 public:
  explicit StateSpaceExceeded(const std::string& what) : Error(what) {}
};

/// Parameters handed to a gadget builder are invalid (weights not summing
/// to one, odd agent count where an even one is required, ...).
class BadParameters : public Error {
 public:
  explicit BadParameters(const std::string& what) : Error(what) {}
};

/// Two objects that must refer to the same ground set do not
/// (e.g. a subset graph over a different item count than the instance).
class DimensionMismatch : public Error {
 public:
  explicit DimensionMismatch(const std::string& what) : Error(what) {}
};

}  // namespace dualfair
