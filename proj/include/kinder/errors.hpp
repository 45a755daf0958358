#pragma once

#include <stdexcept>
#include <string>

namespace kinder {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Precondition or configuration problem in the caller's input.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// An exhaustive mode would exceed its configured size cap.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

// A mathematical property that must hold did not.
class PropertyViolation : public Error {
 public:
  using Error::Error;
};

// Input bytes (certificates, JSON systems) could not be parsed.
class MalformedInput : public Error {
 public:
  using Error::Error;
};

}  // namespace kinder
