#pragma once

#include <charconv>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace slicelab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An operation was called outside its documented domain
/// (wrong characteristic, wrong degree, incompatible dimensions, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Division by zero and similar field-level failures.
class ArithmeticError : public Error {
 public:
  using Error::Error;
};

/// An exhaustive enumeration would exceed the configured budget.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// Malformed polynomial, variety file, field name or config.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A catalog lookup by name failed.
class UnknownCatalogEntry : public Error {
 public:
  using Error::Error;
};

/// A mathematical identity that must hold did not.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

/// Decimal digits to an unsigned integer; ParseError on anything else or on
/// overflow.
inline std::uint64_t parse_u64(std::string_view s, const std::string& what) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) throw ParseError("bad " + what + " '" + std::string(s) + "'");
  return v;
}

}  // namespace slicelab
