#pragma once

#include <stdexcept>
#include <string>

namespace hbl {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two objects that must live in the same ambient space do not.
class AmbientMismatch : public Error {
 public:
  using Error::Error;
};

/// An operation was called outside its documented preconditions.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Malformed textual or JSON input.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// The instance is well formed but outside what the verifier can evaluate
/// (for example an infinite summation domain).
class UnsupportedInstance : public Error {
 public:
  using Error::Error;
};

}  // namespace hbl
