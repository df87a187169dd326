#pragma once

#include <stdexcept>
#include <string>

namespace ermstab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: bad indices, weights, parameters or documents.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// An exact computation would exceed the configured enumeration cap.
class CapExceeded : public Error {
 public:
  CapExceeded(const std::string& what, double requested, double cap)
      : Error(what), requested_(requested), cap_(cap) {}
  double requested() const { return requested_; }
  double cap() const { return cap_; }

 private:
  double requested_;
  double cap_;
};

/// A conditional probability was requested on a null event.
class UndefinedConditional : public Error {
 public:
  using Error::Error;
};

}  // namespace ermstab
