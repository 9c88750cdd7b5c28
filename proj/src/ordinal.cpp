#include "eliminax/ordinal.hpp"

#include <cctype>

namespace eliminax {

namespace {

std::optional<std::uint32_t> parse_number(std::string_view text) {
  if (text.empty()) return std::nullopt;
  std::uint64_t value = 0;
  for (char c : text) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
    value = value * 10 + static_cast<std::uint64_t>(c - '0');
    if (value > 0xffffffffull) return std::nullopt;
  }
  return static_cast<std::uint32_t>(value);
}

}  // namespace

std::string to_string(const Ordinal& a) {
  if (a.omega_coefficient == 0) return std::to_string(a.finite_part);
  std::string out = "w";
  if (a.omega_coefficient > 1) out += "*" + std::to_string(a.omega_coefficient);
  if (a.finite_part > 0) out += "+" + std::to_string(a.finite_part);
  return out;
}

std::optional<Ordinal> parse_ordinal(std::string_view text) {
  if (text.empty()) return std::nullopt;
  if (text[0] != 'w') {
    auto n = parse_number(text);
    if (!n) return std::nullopt;
    return Ordinal::finite(*n);
  }
  text.remove_prefix(1);
  std::uint32_t k = 1;
  if (!text.empty() && text[0] == '*') {
    const std::size_t plus = text.find('+');
    auto coefficient = parse_number(text.substr(1, plus == std::string_view::npos
                                                       ? std::string_view::npos
                                                       : plus - 1));
    if (!coefficient || *coefficient == 0) return std::nullopt;
    k = *coefficient;
    text = plus == std::string_view::npos ? std::string_view() : text.substr(plus);
  }
  if (text.empty()) return Ordinal::omega(k);
  if (text[0] != '+') return std::nullopt;
  auto n = parse_number(text.substr(1));
  if (!n) return std::nullopt;
  return Ordinal::omega(k, *n);
}

}  // namespace eliminax
