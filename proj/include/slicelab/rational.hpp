#pragma once

#include <cstdint>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace slicelab {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Rational make_rational(const BigInt& num, const BigInt& den) { return Rational(num, den); }

inline std::string to_string(const BigInt& v) { return v.str(); }

/// "num/den" in lowest terms; integers print as "num/1".
inline std::string to_fraction_string(const Rational& r) {
  return boost::multiprecision::numerator(r).str() + "/" + boost::multiprecision::denominator(r).str();
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// floor(r) for an exact rational.
inline BigInt floor_rational(const Rational& r) {
  const BigInt num = boost::multiprecision::numerator(r);
  const BigInt den = boost::multiprecision::denominator(r);
  BigInt quot = num / den;
  if (num % den != 0 && num < 0) quot -= 1;
  return quot;
}

/// Nearest integer, ties rounded up.
inline BigInt round_rational(const Rational& r) { return floor_rational(r + Rational(1, 2)); }

inline Rational abs_rational(const Rational& r) { return r < 0 ? Rational(-r) : r; }

inline BigInt ipow(const BigInt& base, unsigned exp) {
  BigInt out = 1;
  for (unsigned i = 0; i < exp; ++i) out *= base;
  return out;
}

}  // namespace slicelab
