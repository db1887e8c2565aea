#pragma once

#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace x4 {

using Integer = boost::multiprecision::cpp_int;
// boost keeps these normalized: reduced, positive denominator, 0 is 0/1
using Rational = boost::multiprecision::cpp_rational;

// accepts "p", "p/q", optional leading sign; throws std::invalid_argument
Rational parse_rational(std::string_view text);

// "p/q" in lowest terms, or "p" when the denominator is 1
std::string to_string(const Rational& r);

Integer floor(const Rational& r);

inline Integer numerator(const Rational& r) { return boost::multiprecision::numerator(r); }
inline Integer denominator(const Rational& r) { return boost::multiprecision::denominator(r); }

}  // namespace x4
