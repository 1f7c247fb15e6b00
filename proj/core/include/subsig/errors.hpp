#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace subsig {

/// Base class for all errors raised by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed formula text; `position` is a 0-based offset into the input.
struct ParseError : Error {
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " (at offset " + std::to_string(position) + ")"),
        position(position) {}
  std::size_t position;
};

/// Invalid input data: bad system spec files, inconsistent distributions,
/// non {0,1}-valued zeta transforms and the like.
struct SpecError : Error {
  using Error::Error;
};

/// An argument outside an operation's domain (e.g. a component queried
/// inside the set it must be excluded from).
struct DomainError : Error {
  using Error::Error;
};

/// A hard size cap was exceeded (component count, enumeration support).
struct CapabilityError : Error {
  using Error::Error;
};

/// Normalizing a subsignature whose total attribution probability is zero.
struct NormalizationUndefined : Error {
  using Error::Error;
};

}  // namespace subsig
