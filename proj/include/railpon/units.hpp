#pragma once

#include <cctype>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "railpon/time.hpp"

namespace railpon {

// Quantity parsing for scenario files and CLI flags. Values are parsed as
// exact scaled decimals (mantissa times a power of ten), never through a
// double, so `9.95328Gb/s` is exactly 9953280000 b/s and `37.5km` is
// exactly 37500000 mm.
namespace units {

struct Decimal {
  std::int64_t mantissa = 0;
  int frac_digits = 0;  // digits after the point
};

inline std::optional<Decimal> parse_decimal(std::string_view text) {
  Decimal d;
  std::size_t i = 0;
  bool any_digit = false;
  bool seen_point = false;
  for (; i < text.size(); ++i) {
    char c = text[i];
    if (c == '.') {
      if (seen_point) return std::nullopt;
      seen_point = true;
      continue;
    }
    if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
    any_digit = true;
    if (d.mantissa > (INT64_MAX - 9) / 10) return std::nullopt;
    d.mantissa = d.mantissa * 10 + (c - '0');
    if (seen_point) ++d.frac_digits;
  }
  if (!any_digit) return std::nullopt;
  return d;
}

// value * 10^scale, requiring the result to be an integer.
inline std::optional<std::int64_t> scale_decimal(const Decimal& d, int scale) {
  __int128 v = d.mantissa;
  int shift = scale - d.frac_digits;
  if (shift < 0) {
    // Fractional part finer than the unit resolution: reject unless the
    // extra digits are zero.
    __int128 div = 1;
    for (int k = 0; k < -shift; ++k) div *= 10;
    if (v % div != 0) return std::nullopt;
    v /= div;
  } else {
    for (int k = 0; k < shift; ++k) {
      v *= 10;
      if (v > INT64_MAX) return std::nullopt;
    }
  }
  return static_cast<std::int64_t>(v);
}

struct Suffix {
  std::string_view text;
  int pow10;
  std::int64_t multiply = 1;  // applied after scaling (e.g. min -> ns)
  std::int64_t divide = 1;    // applied after scaling (e.g. km/h -> mm/s)
};

inline std::optional<std::int64_t> parse_with_suffixes(
    std::string_view text, std::initializer_list<Suffix> suffixes,
    std::string* err, std::string_view what) {
  for (const auto& suf : suffixes) {
    if (text.size() <= suf.text.size()) continue;
    if (text.substr(text.size() - suf.text.size()) != suf.text) continue;
    auto body = text.substr(0, text.size() - suf.text.size());
    auto dec = parse_decimal(body);
    if (!dec) continue;
    auto scaled = scale_decimal(*dec, suf.pow10);
    if (!scaled) {
      if (err) *err = std::string(what) + " '" + std::string(text) +
                      "' is finer than the supported resolution";
      return std::nullopt;
    }
    std::int64_t v = *scaled * suf.multiply;
    if (suf.divide != 1) v = div_round_half_up(v, suf.divide);
    return v;
  }
  if (err)
    *err = "cannot parse " + std::string(what) + " '" + std::string(text) + "'";
  return std::nullopt;
}

}  // namespace units

// Durations in integer nanoseconds: 125us, 20s, 100ms, 1min.
inline std::optional<Nanos> parse_duration_ns(std::string_view text,
                                              std::string* err = nullptr) {
  using units::Suffix;
  return units::parse_with_suffixes(
      text,
      {Suffix{"ns", 0}, Suffix{"us", 3}, Suffix{"ms", 6}, Suffix{"min", 9, 60},
       Suffix{"s", 9}},
      err, "duration");
}

// Track and fiber lengths in integer millimetres: 40km, 500m, 0m.
inline std::optional<std::int64_t> parse_length_mm(std::string_view text,
                                                   std::string* err = nullptr) {
  using units::Suffix;
  return units::parse_with_suffixes(
      text, {Suffix{"mm", 0}, Suffix{"km", 6}, Suffix{"m", 3}}, err, "length");
}

// Bit rates in b/s: 150Mb/s, 9.95328Gb/s, 64kb/s.
inline std::optional<std::int64_t> parse_rate_bps(std::string_view text,
                                                  std::string* err = nullptr) {
  using units::Suffix;
  return units::parse_with_suffixes(
      text,
      {Suffix{"kb/s", 3}, Suffix{"Mb/s", 6}, Suffix{"Gb/s", 9},
       Suffix{"b/s", 0}},
      err, "rate");
}

// Byte counts: 1200B, 64kB.
inline std::optional<std::int64_t> parse_bytes(std::string_view text,
                                               std::string* err = nullptr) {
  using units::Suffix;
  return units::parse_with_suffixes(
      text, {Suffix{"kB", 3}, Suffix{"MB", 6}, Suffix{"B", 0}}, err, "size");
}

// Speeds in mm/s: 100m/s, 360km/h.
inline std::optional<std::int64_t> parse_speed_mm_s(std::string_view text,
                                                    std::string* err = nullptr) {
  using units::Suffix;
  return units::parse_with_suffixes(
      text,
      {Suffix{"mm/s", 0}, Suffix{"m/s", 3}, Suffix{"km/h", 6, 1, 3600},
       Suffix{"km/s", 6}},
      err, "speed");
}

// Carrier frequencies in Hz: 700MHz, 3.5GHz.
inline std::optional<std::int64_t> parse_frequency_hz(
    std::string_view text, std::string* err = nullptr) {
  using units::Suffix;
  return units::parse_with_suffixes(
      text,
      {Suffix{"kHz", 3}, Suffix{"MHz", 6}, Suffix{"GHz", 9}, Suffix{"Hz", 0}},
      err, "frequency");
}

// Losses and link budgets in integer milli-dB: 120dB, 0.4dB.
inline std::optional<std::int64_t> parse_mdb(std::string_view text,
                                             std::string* err = nullptr) {
  using units::Suffix;
  return units::parse_with_suffixes(text, {Suffix{"dB", 3}}, err, "loss");
}

// Plain non-negative decimal (group index, jitter fraction).
inline std::optional<double> parse_plain(std::string_view text,
                                         std::string* err = nullptr) {
  auto dec = units::parse_decimal(text);
  if (!dec) {
    if (err) *err = "cannot parse number '" + std::string(text) + "'";
    return std::nullopt;
  }
  double v = static_cast<double>(dec->mantissa);
  for (int k = 0; k < dec->frac_digits; ++k) v /= 10.0;
  return v;
}

}  // namespace railpon
