/*
  wei.hpp: exact arithmetic for on-chain amounts.

  Amounts are carried as arbitrary-precision integers in Wei end to end;
  percentages are exact rationals. Floating point never touches a value.
  Decimal parse/serialize round-trips bit-exactly for canonical strings
  (256-bit values do not fit any built-in integer type).
*/
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace chaintrail {

using Wei = boost::multiprecision::cpp_int;
using Ratio = boost::multiprecision::cpp_rational;

inline bool is_decimal_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

// Strict non-negative decimal parse. `what` names the field in the error.
inline Wei parse_wei(std::string_view s, std::string_view what = "value") {
  if (!is_decimal_digits(s)) {
    throw std::invalid_argument(std::string(what) + ": not a decimal integer: '" +
                                std::string(s) + "'");
  }
  return Wei(std::string(s));
}

inline std::string to_decimal_string(const Wei& v) { return v.str(); }

inline std::uint64_t parse_u64(std::string_view s, std::string_view what) {
  if (!is_decimal_digits(s) || s.size() > 20) {
    throw std::invalid_argument(std::string(what) + ": not a decimal integer: '" +
                                std::string(s) + "'");
  }
  std::uint64_t out = 0;
  for (char c : s) {
    std::uint64_t digit = static_cast<std::uint64_t>(c - '0');
    if (out > (UINT64_MAX - digit) / 10) {
      throw std::invalid_argument(std::string(what) + ": out of range: '" +
                                  std::string(s) + "'");
    }
    out = out * 10 + digit;
  }
  return out;
}

// Renders a Wei amount as an exact Ether decimal string (10^18 Wei = 1 Ether).
// Pure digit placement, no division: trailing zeros after the point are trimmed.
inline std::string wei_to_ether(const Wei& v) {
  std::string digits = v.str();
  constexpr std::size_t kEtherDecimals = 18;
  std::string whole, frac;
  if (digits.size() > kEtherDecimals) {
    whole = digits.substr(0, digits.size() - kEtherDecimals);
    frac = digits.substr(digits.size() - kEtherDecimals);
  } else {
    whole = "0";
    frac = std::string(kEtherDecimals - digits.size(), '0') + digits;
  }
  while (!frac.empty() && frac.back() == '0') frac.pop_back();
  return frac.empty() ? whole : whole + "." + frac;
}

// Loss along a cycle: 100 * (out - returned) / out, exact. Negative when the
// cycle returns more than it sent.
inline Ratio loss_percent(const Wei& out_value, const Wei& returned_value) {
  if (out_value <= 0) {
    throw std::domain_error("loss_percent: out value must be positive");
  }
  return Ratio(100 * (out_value - returned_value), out_value);
}

// Fixed-point rendering of an exact rational, `places` digits after the
// point, rounding half away from zero. Used for report fields where byte
// determinism matters.
inline std::string format_ratio_fixed(const Ratio& r, unsigned places = 4) {
  Wei num = boost::multiprecision::numerator(r);
  Wei den = boost::multiprecision::denominator(r);  // cpp_rational keeps den > 0
  bool negative = num < 0;
  if (negative) num = -num;
  Wei scale = 1;
  for (unsigned i = 0; i < places; ++i) scale *= 10;
  Wei scaled = num * scale;
  Wei q = scaled / den;
  Wei rem = scaled % den;
  if (rem * 2 >= den) ++q;
  std::string digits = q.str();
  if (digits.size() <= places) digits.insert(0, places + 1 - digits.size(), '0');
  std::string out = digits.substr(0, digits.size() - places);
  if (places > 0) out += "." + digits.substr(digits.size() - places);
  if (negative && q != 0) out.insert(0, 1, '-');
  return out;
}

// Human-oriented variant: same rounding, trailing zeros and a bare point trimmed.
inline std::string format_ratio_trim(const Ratio& r, unsigned places = 4) {
  std::string s = format_ratio_fixed(r, places);
  if (s.find('.') != std::string::npos) {
    while (s.back() == '0') s.pop_back();
    if (s.back() == '.') s.pop_back();
  }
  return s;
}

// Parses a percentage like "10", "-2", "2.5" into an exact rational.
inline Ratio parse_percent(std::string_view s, std::string_view what = "percent") {
  std::string_view rest = s;
  bool negative = false;
  if (!rest.empty() && (rest.front() == '-' || rest.front() == '+')) {
    negative = rest.front() == '-';
    rest.remove_prefix(1);
  }
  auto dot = rest.find('.');
  std::string_view whole = rest.substr(0, dot);
  std::string_view frac = dot == std::string_view::npos ? std::string_view{} : rest.substr(dot + 1);
  if (!is_decimal_digits(whole) || (dot != std::string_view::npos && !is_decimal_digits(frac))) {
    throw std::invalid_argument(std::string(what) + ": not a decimal number: '" +
                                std::string(s) + "'");
  }
  Wei num(std::string(whole) + std::string(frac));
  Wei den = 1;
  for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
  if (negative) num = -num;
  return Ratio(num, den);
}

}  // namespace chaintrail
