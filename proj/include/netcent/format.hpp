#pragma once

#include <array>
#include <charconv>
#include <cmath>
#include <string>

#include "netcent/error.hpp"

namespace netcent {

/**
 * Fixed-point text of x rounded to `places` decimals, half away from zero.
 *
 * Rounding is applied to the shortest round-trip decimal string of x (not to
 * its exact binary expansion), so 0.1234565 rounds to 0.123457 even though
 * the nearest double lies just below it. Results that round to zero print
 * without a sign.
 */
inline std::string fixed_decimal(double x, int places) {
  if (!std::isfinite(x)) throw ContractError("fixed_decimal: non-finite value");
  std::array<char, 400> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x, std::chars_format::fixed);
  if (ec != std::errc{}) throw ContractError("fixed_decimal: value too large to format");
  std::string s(buf.data(), end);

  bool negative = false;
  if (!s.empty() && s.front() == '-') {
    negative = true;
    s.erase(0, 1);
  }
  std::string int_part = s, frac;
  if (auto dot = s.find('.'); dot != std::string::npos) {
    int_part = s.substr(0, dot);
    frac = s.substr(dot + 1);
  }
  const auto keep = static_cast<std::size_t>(places);
  bool round_up = frac.size() > keep && frac[keep] >= '5';
  frac.resize(keep, '0');

  std::string digits = int_part + frac;
  if (round_up) {
    std::size_t i = digits.size();
    while (i > 0) {
      --i;
      if (digits[i] == '9') {
        digits[i] = '0';
      } else {
        ++digits[i];
        round_up = false;
        break;
      }
    }
    if (round_up) digits.insert(digits.begin(), '1');
  }
  const std::size_t int_len = digits.size() - keep;
  std::string out = digits.substr(0, int_len);
  if (keep > 0) out += "." + digits.substr(int_len);

  const bool zero = out.find_first_not_of("0.") == std::string::npos;
  return (negative && !zero) ? "-" + out : out;
}

/// Numeric value of fixed_decimal(x, places).
inline double round_decimal(double x, int places) {
  const auto text = fixed_decimal(x, places);
  double value = 0.0;
  std::from_chars(text.data(), text.data() + text.size(), value);
  return value;
}

}  // namespace netcent
