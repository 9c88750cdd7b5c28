#include "eliminax/rational.hpp"

#include <cctype>

namespace eliminax {

namespace {

bool parse_integer(std::string_view text, bool allow_sign, Integer* out) {
  if (text.empty()) return false;
  std::size_t pos = 0;
  bool negative = false;
  if (allow_sign && (text[0] == '-' || text[0] == '+')) {
    negative = text[0] == '-';
    pos = 1;
  }
  if (pos == text.size()) return false;
  Integer value = 0;
  for (; pos < text.size(); ++pos) {
    if (!std::isdigit(static_cast<unsigned char>(text[pos]))) return false;
    value = value * 10 + (text[pos] - '0');
  }
  *out = negative ? -value : value;
  return true;
}

}  // namespace

std::optional<Rational> parse_rational(std::string_view text) {
  const std::size_t slash = text.find('/');
  Integer num;
  if (slash == std::string_view::npos) {
    if (!parse_integer(text, true, &num)) return std::nullopt;
    return Rational(num);
  }
  Integer den;
  if (!parse_integer(text.substr(0, slash), true, &num)) return std::nullopt;
  if (!parse_integer(text.substr(slash + 1), false, &den)) return std::nullopt;
  if (den == 0) return std::nullopt;
  return Rational(num, den);
}

std::string to_string(const Rational& q) {
  std::string out = numerator(q).str();
  if (denominator(q) != 1) {
    out += '/';
    out += denominator(q).str();
  }
  return out;
}

}  // namespace eliminax
