#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace quniform {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: bad alpha-spec text, zero denominators, perfect squares.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// An argument outside the operation's domain (n = 0, base < 2, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An index past the end of a finite or prefix-only expansion.
class OutOfRange : public Error {
 public:
  using Error::Error;
};

/// The input class is valid but not handled by this operation
/// (rational alpha in the three-gap machinery).
class Unsupported : public Error {
 public:
  using Error::Error;
};

/// A certified decision could not be reached within the precision ceiling
/// or the known digits of a prefix-only expansion.
class PrecisionUnresolved : public Error {
 public:
  PrecisionUnresolved(const std::string& what, std::size_t depth_needed)
      : Error(what + " (needs continued-fraction depth > " + std::to_string(depth_needed) + ")"),
        depth_needed_(depth_needed) {}

  std::size_t depth_needed() const noexcept { return depth_needed_; }

 private:
  std::size_t depth_needed_;
};

}  // namespace quniform
