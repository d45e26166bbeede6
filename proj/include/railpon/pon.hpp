#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "railpon/time.hpp"

namespace railpon {

inline constexpr double kSpeedOfLight = 299'792'458.0;  // m/s
inline constexpr std::int64_t kXgsPonRate = 9'953'280'000;  // b/s, symmetric

class RangingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One trackside ONU: a radio unit on the rail plus its fiber tail to the
// OLT. Track positions and fiber lengths are integer millimetres.
struct OnuNode {
  int id = 0;
  std::int64_t track_mm = 0;
  std::int64_t fiber_mm = 0;
  Nanos eq_delay = -1;  // set by ranging; -1 = unranged
  bool active = true;

  bool ranged() const { return eq_delay >= 0; }
};

struct OltConfig {
  std::int64_t downstream_bps = kXgsPonRate;
  std::int64_t upstream_bps = kXgsPonRate;
  Nanos guard_ns = 26;  // 256 bit-times at the XGS-PON rate, rounded
  double group_index = 1.468;
  std::int64_t max_fiber_mm = 40'000'000;  // ranging reference distance
};

// One-way fiber delay, rounded half-up to integer nanoseconds.
// mm * group_index / 299.792458 == metres * n / c in ns.
inline Nanos propagation_delay_ns(std::int64_t fiber_mm, double group_index) {
  if (fiber_mm < 0) throw std::invalid_argument("negative fiber length");
  if (group_index < 1.0) throw std::invalid_argument("group index below 1");
  return static_cast<Nanos>(
      std::llround(static_cast<double>(fiber_mm) * group_index / 299.792458));
}

// Ranging: assign the equalization delay that makes every ONU's
// (eq_delay + round trip) equal to the round trip of an ONU at the
// reference distance. Done in integer nanoseconds, so the equalized round
// trips match exactly.
inline Nanos range_onu(OnuNode& onu, std::int64_t max_fiber_mm,
                       double group_index) {
  if (onu.fiber_mm > max_fiber_mm) {
    throw RangingError("onu " + std::to_string(onu.id) + " fiber " +
                       std::to_string(onu.fiber_mm) +
                       "mm exceeds ranging reference " +
                       std::to_string(max_fiber_mm) + "mm");
  }
  const Nanos far = propagation_delay_ns(max_fiber_mm, group_index);
  const Nanos own = propagation_delay_ns(onu.fiber_mm, group_index);
  onu.eq_delay = 2 * (far - own);
  return onu.eq_delay;
}

// Airtime of `bytes` at `rate_bps`, rounded half-up to ns.
inline Nanos slot_duration_ns(std::int64_t bytes, std::int64_t rate_bps) {
  return div_round_half_up(bytes * 8 * kNanosPerSec, rate_bps);
}

// One upstream burst as seen at the OLT. `start` is the arrival instant of
// the slot; burst payload is considered available at `start` (the engine's
// event granularity is the slot, not the byte).
struct BurstRecord {
  int onu_id = 0;
  int tcont_id = 0;
  Nanos start = 0;
  Nanos duration = 0;
  std::int64_t bytes_carried = 0;
};

// OLT-side arrival of a granted burst. The grant names an OLT-side slot
// start; the ONU hears it one trip later, waits out its equalization
// delay, and the burst lands back at the OLT after the equalized round
// trip, identical for every ranged ONU:
//   start = grant_start + eq_delay + 2 * propagation_delay(fiber).
inline BurstRecord upstream_burst_arrival(const OnuNode& onu, Nanos grant_start,
                                          std::int64_t grant_bytes,
                                          const OltConfig& olt) {
  if (!onu.ranged())
    throw RangingError("onu " + std::to_string(onu.id) + " is not ranged");
  if (grant_bytes <= 0) throw std::invalid_argument("grant_bytes must be > 0");
  BurstRecord rec;
  rec.onu_id = onu.id;
  rec.start = grant_start + onu.eq_delay +
              2 * propagation_delay_ns(onu.fiber_mm, olt.group_index);
  rec.duration = slot_duration_ns(grant_bytes, olt.upstream_bps);
  return rec;
}

// Downstream frames are broadcast: every active ONU observes a frame sent
// at `t_send` after its own one-way fiber delay.
inline std::vector<std::pair<int, Nanos>> downstream_observation_times(
    const std::vector<OnuNode>& onus, Nanos t_send, double group_index) {
  std::vector<std::pair<int, Nanos>> out;
  out.reserve(onus.size());
  for (const auto& onu : onus) {
    if (!onu.active) continue;
    out.emplace_back(onu.id,
                     t_send + propagation_delay_ns(onu.fiber_mm, group_index));
  }
  return out;
}

}  // namespace railpon
