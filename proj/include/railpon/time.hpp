#pragma once

#include <cstdint>
#include <stdexcept>

namespace railpon {

// All simulation time is integer nanoseconds since scenario start. The
// 125 us PON frame and every fiber/track distance used by the scheduler
// stay exact in this base; no floating-point clock drift is possible.
using Nanos = std::int64_t;

inline constexpr Nanos kNanosPerMicro = 1'000;
inline constexpr Nanos kNanosPerMilli = 1'000'000;
inline constexpr Nanos kNanosPerSec = 1'000'000'000;
inline constexpr Nanos kDefaultFramePeriod = 125 * kNanosPerMicro;

// Round-half-up division for non-negative operands.
constexpr std::int64_t div_round_half_up(std::int64_t num, std::int64_t den) {
  return (num + den / 2) / den;
}

constexpr std::int64_t div_ceil(std::int64_t num, std::int64_t den) {
  return (num + den - 1) / den;
}

// Ceiling division that tolerates a negative numerator (used by the DBA
// credit counters, which may carry a byte of debt between frames).
constexpr std::int64_t div_ceil_signed(std::int64_t num, std::int64_t den) {
  if (num <= 0) return -((-num) / den);
  return (num + den - 1) / den;
}

}  // namespace railpon
