#pragma once

#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace opsplit::algebra {

/// Exact rational with arbitrary-precision numerator and denominator.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Parses "p", "-p" or "p/q". Throws ParseError on malformed text or q == 0.
Rational parse_rational(const std::string& text);

/// "p/q", or "p" when the denominator is one.
std::string to_string(const Rational& r);

Rational factorial(int k);

} // namespace opsplit::algebra
