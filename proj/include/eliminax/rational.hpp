#pragma once

#include <optional>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace eliminax {

// All payoffs and LP coefficients are exact rationals; nothing in the
// library ever rounds. Canonical form (lowest terms, positive
// denominator) is maintained by the number type itself.
using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Accepts "7", "-3" and "a/b" where a is an integer and b a positive
// integer. Returns nullopt for anything else (including "1/0").
std::optional<Rational> parse_rational(std::string_view text);

// Renders "n" when the denominator is 1, else "a/b".
std::string to_string(const Rational& q);

}  // namespace eliminax
