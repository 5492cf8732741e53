#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace dqs {

/// Exact rational used for all time arithmetic. Interval endpoints and
/// schedule instants never touch floating point, so strict orderings and
/// equality of chosen instants are decidable.
using Rational = boost::multiprecision::cpp_rational;

/// Parses "7", "3/4" or an exact decimal like "2.25". Throws
/// std::invalid_argument on anything else.
Rational parse_rational(const std::string& text);

/// Canonical form: "num" when the denominator is 1, else "num/den".
std::string to_string(const Rational& r);

double to_double(const Rational& r);

}  // namespace dqs
