#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "railpon/mac_table.hpp"
#include "railpon/pon.hpp"
#include "railpon/time.hpp"

namespace railpon {

// Train kinematics. Positions are exact rationals with denominator 1e9:
// pos_mm(t) * 1e9 = start_mm * 1e9 + speed_mm_s * t_ns. Every coverage and
// zone test below is an integer comparison on that numerator, so cell and
// overlap boundaries are hit exactly, never within float epsilon.
struct TrainMotion {
  std::int64_t start_mm = 0;
  std::int64_t speed_mm_s = 0;
  MacAddr mac = 0;

  __int128 pos_num(Nanos t) const {
    return static_cast<__int128>(start_mm) * kNanosPerSec +
           static_cast<__int128>(speed_mm_s) * t;
  }
};

struct Association {
  std::vector<int> serving;  // 0 (coverage gap), 1, or 2 track-adjacent ONUs

  bool contains(int id) const {
    return std::find(serving.begin(), serving.end(), id) != serving.end();
  }
  bool operator==(const Association& o) const { return serving == o.serving; }
};

namespace detail {
inline __int128 abs128(__int128 v) { return v < 0 ? -v : v; }
}

// Radio attachment rule: the single nearest ONU, or the two adjacent ONUs
// when the train is within `overlap_mm` of their cell-boundary midpoint.
// Members farther than `radius_mm` are dropped; an empty result is a
// coverage gap. `onus` must be sorted by track position.
inline Association update_association(const std::vector<OnuNode>& onus,
                                      __int128 pos_num,
                                      std::int64_t radius_mm,
                                      std::int64_t overlap_mm) {
  const __int128 scale = kNanosPerSec;
  Association out;
  std::vector<const OnuNode*> act;
  act.reserve(onus.size());
  for (const auto& o : onus)
    if (o.active) act.push_back(&o);
  if (act.empty()) return out;

  std::size_t right = 0;
  while (right < act.size() &&
         static_cast<__int128>(act[right]->track_mm) * scale < pos_num)
    ++right;
  const OnuNode* lo = right > 0 ? act[right - 1] : nullptr;
  const OnuNode* hi = right < act.size() ? act[right] : nullptr;

  auto dist = [&](const OnuNode* o) {
    return detail::abs128(static_cast<__int128>(o->track_mm) * scale - pos_num);
  };
  const __int128 reach = static_cast<__int128>(radius_mm) * scale;

  if (lo && hi && lo != hi) {
    // |2*pos - (a+b)| <= 2*overlap, all integers: inside the handover zone.
    const __int128 mid2 = (static_cast<__int128>(lo->track_mm) +
                           static_cast<__int128>(hi->track_mm)) *
                          scale;
    if (detail::abs128(2 * pos_num - mid2) <=
        2 * static_cast<__int128>(overlap_mm) * scale) {
      if (dist(lo) <= reach) out.serving.push_back(lo->id);
      if (dist(hi) <= reach) out.serving.push_back(hi->id);
      if (!out.serving.empty()) return out;
    }
  }
  const OnuNode* nearest =
      !lo ? hi : (!hi ? lo : (dist(lo) <= dist(hi) ? lo : hi));
  if (nearest && dist(nearest) <= reach) out.serving.push_back(nearest->id);
  return out;
}

// Sliding whitelist window: previous/current/next ONU around the primary
// (nearest) serving ONU, degrading to two entries at the track ends.
inline std::vector<int> window_around(const std::vector<OnuNode>& onus,
                                      int primary_id) {
  std::vector<int> win;
  for (std::size_t i = 0; i < onus.size(); ++i) {
    if (onus[i].id != primary_id) continue;
    if (i > 0) win.push_back(onus[i - 1].id);
    win.push_back(onus[i].id);
    if (i + 1 < onus.size()) win.push_back(onus[i + 1].id);
    break;
  }
  return win;
}

// Times at which the serving set can change: crossings of every cell edge
// and every handover-zone edge. The engine probes at floor(t) and
// floor(t)+1 around each exact crossing and records a transition whenever
// the recomputed set differs, so fractional crossings cannot be missed.
inline std::vector<Nanos> association_probe_times(
    const std::vector<OnuNode>& onus, std::int64_t radius_mm,
    std::int64_t overlap_mm, const TrainMotion& train, Nanos end_time) {
  std::vector<Nanos> times;
  if (train.speed_mm_s <= 0) return times;
  // Boundary coordinates in doubled millimetres (midpoints are half-mm).
  std::vector<__int128> bounds2;
  for (std::size_t i = 0; i < onus.size(); ++i) {
    if (!onus[i].active) continue;
    bounds2.push_back(2 * (static_cast<__int128>(onus[i].track_mm) - radius_mm));
    bounds2.push_back(2 * (static_cast<__int128>(onus[i].track_mm) + radius_mm));
    for (std::size_t j = i + 1; j < onus.size(); ++j) {
      if (!onus[j].active) continue;
      const __int128 mid2 = static_cast<__int128>(onus[i].track_mm) +
                            static_cast<__int128>(onus[j].track_mm);
      bounds2.push_back(mid2 - 2 * overlap_mm);
      bounds2.push_back(mid2 + 2 * overlap_mm);
      break;  // only the adjacent neighbour matters
    }
  }
  for (__int128 b2 : bounds2) {
    // 2*start + 2*speed*t/1e9 = b2  =>  t = (b2 - 2*start)*1e9 / (2*speed)
    const __int128 num =
        (b2 - 2 * static_cast<__int128>(train.start_mm)) * kNanosPerSec;
    const __int128 den = 2 * static_cast<__int128>(train.speed_mm_s);
    if (num < 0) continue;
    const __int128 t = num / den;
    for (__int128 cand : {t, t + 1}) {
      if (cand >= 0 && cand <= end_time)
        times.push_back(static_cast<Nanos>(cand));
    }
  }
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());
  return times;
}

// Doppler shift of `carrier_hz` seen from a platform moving at
// `speed_mps` with path-cosine `angle_cos`.
inline double doppler_shift(double speed_mps, double carrier_hz,
                            double angle_cos) {
  return speed_mps * carrier_hz * angle_cos / kSpeedOfLight;
}

}  // namespace railpon
