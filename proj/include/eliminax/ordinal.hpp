#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace eliminax {

// Stage indices of the form w*k + n. Everything the engine iterates or
// replays closes by w+1, so this fragment is enough; the comparison is
// lexicographic in (k, n) and the only representable limit ordinals are
// (k, 0) with k >= 1.
struct Ordinal {
  std::uint32_t omega_coefficient = 0;  // k
  std::uint32_t finite_part = 0;        // n

  static Ordinal finite(std::uint32_t n) { return {0, n}; }
  static Ordinal omega(std::uint32_t k = 1, std::uint32_t n = 0) { return {k, n}; }

  bool is_finite() const { return omega_coefficient == 0; }
  bool is_limit() const { return omega_coefficient >= 1 && finite_part == 0; }
  Ordinal successor() const { return {omega_coefficient, finite_part + 1}; }

  friend auto operator<=>(const Ordinal&, const Ordinal&) = default;
};

// "12", "w", "w+3", "w*2", "w*2+5".
std::string to_string(const Ordinal& a);
std::optional<Ordinal> parse_ordinal(std::string_view text);

}  // namespace eliminax
