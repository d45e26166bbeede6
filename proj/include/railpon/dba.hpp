#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "railpon/pon.hpp"
#include "railpon/time.hpp"

namespace railpon {

// Credit counters are kept in bit-nanoseconds: rate_bps * frame_ns
// accrues per frame, 8e9 bit-ns equals one byte. All allocation
// arithmetic is exact integer math, so the 150 Mb/s fixed profile
// averages exactly 2343.75 bytes per frame over any multiple of 4 frames.
inline constexpr std::int64_t kBitNsPerByte = 8LL * kNanosPerSec;

enum class TContType { type1 = 1, type2 = 2, type3 = 3, type4 = 4 };

struct TContProfile {
  int id = 0;
  TContType type = TContType::type4;
  std::int64_t fixed_bps = 0;
  std::int64_t assured_bps = 0;
  std::int64_t max_bps = 0;
  int owner_onu = 0;
  std::string label;  // flows bind to the tcont with this label on the serving ONU
  std::int64_t queue_cap_packets = 0;  // 0 = unbounded
};

inline std::vector<std::string> validate_profile(const TContProfile& p) {
  std::vector<std::string> errs;
  auto tag = [&](const std::string& m) {
    errs.push_back("tcont " + std::to_string(p.id) + ": " + m);
  };
  if (p.fixed_bps < 0 || p.assured_bps < 0 || p.max_bps < 0)
    tag("bandwidths must be non-negative");
  if (!(p.fixed_bps <= p.assured_bps && p.assured_bps <= p.max_bps))
    tag("requires fixed <= assured <= max");
  switch (p.type) {
    case TContType::type1:
      if (p.fixed_bps <= 0 || p.assured_bps != p.fixed_bps ||
          p.max_bps != p.fixed_bps)
        tag("type 1 is fixed-only (assured = max = fixed > 0)");
      break;
    case TContType::type2:
      if (p.fixed_bps <= 0) tag("type 2 requires fixed bandwidth > 0");
      break;
    case TContType::type3:
      if (p.fixed_bps != 0 || p.assured_bps <= 0)
        tag("type 3 requires fixed = 0 and assured > 0");
      break;
    case TContType::type4:
      if (p.fixed_bps != 0 || p.assured_bps != 0)
        tag("type 4 is best-effort only (fixed = assured = 0)");
      break;
  }
  return errs;
}

struct QueuedPacket {
  std::uint64_t packet_id = 0;
  std::int64_t bytes_left = 0;
  Nanos enqueued_at = 0;
};

// Per-tcont FIFO of packet bytes. Packets fragment across bursts the way
// XGEM fragments frames; a packet completes when its last byte is taken.
class TContQueue {
 public:
  // Returns false when the packet cap rejects the arrival.
  bool enqueue(std::uint64_t packet_id, std::int64_t bytes, Nanos now,
               std::int64_t cap_packets) {
    if (cap_packets > 0 &&
        static_cast<std::int64_t>(q_.size()) >= cap_packets)
      return false;
    q_.push_back(QueuedPacket{packet_id, bytes, now});
    queued_bytes_ += bytes;
    return true;
  }

  // Demand visible to a frame starting at `before`: only bytes that were
  // queued strictly earlier. Arrivals at the frame boundary wait for the
  // next frame.
  std::int64_t eligible_bytes(Nanos before) const {
    std::int64_t sum = 0;
    for (const auto& p : q_) {
      if (p.enqueued_at >= before) break;
      sum += p.bytes_left;
    }
    return sum;
  }

  std::int64_t queued_bytes() const { return queued_bytes_; }
  std::size_t queued_packets() const { return q_.size(); }

  struct Taken {
    std::int64_t bytes = 0;
    std::vector<std::uint64_t> completed;  // packets whose last byte left
  };

  Taken take(std::int64_t grant_bytes, Nanos before) {
    Taken out;
    while (grant_bytes > 0 && !q_.empty() && q_.front().enqueued_at < before) {
      auto& head = q_.front();
      const std::int64_t n = std::min(grant_bytes, head.bytes_left);
      head.bytes_left -= n;
      grant_bytes -= n;
      out.bytes += n;
      queued_bytes_ -= n;
      if (head.bytes_left == 0) {
        out.completed.push_back(head.packet_id);
        q_.pop_front();
      }
    }
    return out;
  }

 private:
  std::deque<QueuedPacket> q_;
  std::int64_t queued_bytes_ = 0;
};

struct GrantEntry {
  int tcont_id = 0;
  Nanos start_offset = 0;  // within the frame, OLT-side
  std::int64_t grant_bytes = 0;
};

struct GrantTable {
  std::uint64_t frame_index = 0;
  std::vector<GrantEntry> entries;  // laid out in tcont-id order
};

// Three-phase per-frame allocator:
//   1. every tcont receives its fixed quota unconditionally;
//   2. remaining capacity serves demand up to the assured rate;
//   3. leftover capacity is shared by demand up to the maximum rate,
//      proportional to residual demand with a rotating byte-remainder
//      cursor as the tie-break.
class DbaScheduler {
 public:
  DbaScheduler(std::vector<TContProfile> profiles, const OltConfig& olt,
               Nanos frame_ns)
      : olt_(olt), frame_ns_(frame_ns) {
    std::sort(profiles.begin(), profiles.end(),
              [](const TContProfile& a, const TContProfile& b) {
                return a.id < b.id;
              });
    for (auto& p : profiles) {
      index_by_id_[p.id] = slots_.size();
      slots_.push_back(Slot{p, TContQueue{}, 0, 0, 0});
    }
  }

  bool has(int tcont_id) const { return index_by_id_.count(tcont_id) != 0; }

  TContQueue& queue(int tcont_id) { return slot_at(tcont_id).queue; }
  const TContProfile& profile(int tcont_id) {
    return slot_at(tcont_id).profile;
  }

  std::size_t size() const { return slots_.size(); }
  const TContProfile& profile_at(std::size_t i) const {
    return slots_[i].profile;
  }

  // Frame capacity in payload bytes, before per-burst guard overhead.
  std::int64_t capacity_bytes() const {
    return olt_.upstream_bps * frame_ns_ / kBitNsPerByte;
  }

  // Bytes charged per opened burst to cover the guard interval plus the
  // half-nanosecond duration rounding, so the laid-out slots always fit
  // the frame.
  std::int64_t guard_bytes() const {
    return div_ceil(olt_.guard_ns * olt_.upstream_bps, kBitNsPerByte) +
           div_ceil(olt_.upstream_bps, 16 * kNanosPerSec);
  }

  GrantTable grant_frame(std::uint64_t frame_index, Nanos frame_start) {
    const std::int64_t gb = guard_bytes();
    std::int64_t remaining = capacity_bytes();
    std::vector<std::int64_t> alloc(slots_.size(), 0);
    std::vector<std::int64_t> demand(slots_.size(), 0);

    // Phase 1: unconditional fixed slots.
    for (std::size_t i = 0; i < slots_.size(); ++i) {
      Slot& s = slots_[i];
      demand[i] = s.queue.eligible_bytes(frame_start);
      s.fixed_credit += s.profile.fixed_bps * frame_ns_;
      std::int64_t q = div_ceil_signed(s.fixed_credit, kBitNsPerByte);
      if (q < 0) q = 0;
      refill(s.assured_budget, s.profile.assured_bps);
      refill(s.max_budget, s.profile.max_bps);
      if (q > 0) {
        q = std::min(q, std::max<std::int64_t>(remaining - gb, 0));
        if (q > 0) {
          s.fixed_credit -= q * kBitNsPerByte;
          s.assured_budget -= q * kBitNsPerByte;
          s.max_budget -= q * kBitNsPerByte;
          alloc[i] = q;
          remaining -= q + gb;
        }
      }
    }

    // Phase 2: demand up to the assured rate.
    for (std::size_t i = 0; i < slots_.size(); ++i) {
      Slot& s = slots_[i];
      const std::int64_t need = demand[i] - alloc[i];
      if (need <= 0) continue;
      std::int64_t quota = s.assured_budget / kBitNsPerByte;
      if (quota <= 0) continue;
      const std::int64_t open_cost = alloc[i] == 0 ? gb : 0;
      std::int64_t give =
          std::min({need, quota, std::max<std::int64_t>(remaining - open_cost, 0)});
      if (give <= 0) continue;
      alloc[i] += give;
      remaining -= give + open_cost;
      s.assured_budget -= give * kBitNsPerByte;
      s.max_budget -= give * kBitNsPerByte;
    }

    // Phase 3: leftover shared proportionally to residual demand, capped
    // by the max-rate budget.
    phase3(alloc, demand, remaining, gb);

    GrantTable table;
    table.frame_index = frame_index;
    Nanos cursor = 0;
    for (std::size_t i = 0; i < slots_.size(); ++i) {
      if (alloc[i] <= 0) continue;
      table.entries.push_back(
          GrantEntry{slots_[i].profile.id, cursor, alloc[i]});
      cursor += slot_duration_ns(alloc[i], olt_.upstream_bps) + olt_.guard_ns;
    }
    if (cursor > 0 && cursor - olt_.guard_ns > frame_ns_)
      throw std::logic_error("grant table overflows frame");
    return table;
  }

 private:
  struct Slot {
    TContProfile profile;
    TContQueue queue;
    std::int64_t fixed_credit = 0;    // bit-ns, may carry a byte of debt
    std::int64_t assured_budget = 0;  // bit-ns token bucket, depth one frame
    std::int64_t max_budget = 0;
  };

  Slot& slot_at(int tcont_id) {
    auto it = index_by_id_.find(tcont_id);
    if (it == index_by_id_.end())
      throw std::invalid_argument("unknown tcont id " + std::to_string(tcont_id));
    return slots_[it->second];
  }

  // Token bucket refill with depth of one frame quota (plus one byte for
  // rounding). Debt from fixed-slot ceil rounding carries over.
  void refill(std::int64_t& budget, std::int64_t rate_bps) const {
    const std::int64_t add = rate_bps * frame_ns_;
    budget = std::min(budget + add, add + kBitNsPerByte);
  }

  void phase3(std::vector<std::int64_t>& alloc,
              const std::vector<std::int64_t>& demand, std::int64_t remaining,
              std::int64_t gb) {
    std::vector<std::size_t> active;
    std::vector<std::int64_t> cap(slots_.size(), 0);
    for (std::size_t i = 0; i < slots_.size(); ++i) {
      std::int64_t w = std::min(demand[i] - alloc[i],
                                slots_[i].max_budget / kBitNsPerByte);
      if (w <= 0) continue;
      if (alloc[i] == 0) {
        if (remaining <= gb) continue;
        remaining -= gb;  // open the burst for this tcont
      }
      cap[i] = w;
      active.push_back(i);
    }
    while (!active.empty() && remaining > 0) {
      std::int64_t total_w = 0;
      for (auto i : active) total_w += cap[i];
      if (total_w <= remaining) {
        // Demand fully satisfiable.
        for (auto i : active) give(alloc, i, cap[i]);
        return;
      }
      // Largest-remainder proportional split; the odd bytes go out on a
      // rotating cursor so equal profiles converge to equal shares.
      std::int64_t handed = 0;
      std::vector<std::int64_t> base(active.size(), 0);
      for (std::size_t k = 0; k < active.size(); ++k) {
        base[k] = static_cast<std::int64_t>(
            static_cast<__int128>(remaining) * cap[active[k]] / total_w);
        base[k] = std::min(base[k], cap[active[k]]);
        handed += base[k];
      }
      std::int64_t leftover = remaining - handed;
      for (std::size_t n = 0; n < active.size() && leftover > 0; ++n) {
        std::size_t k = (rr_cursor_ + n) % active.size();
        if (base[k] < cap[active[k]]) {
          ++base[k];
          --leftover;
          ++handed;
        }
      }
      rr_cursor_ = active.empty() ? 0 : (rr_cursor_ + 1) % active.size();
      for (std::size_t k = 0; k < active.size(); ++k)
        if (base[k] > 0) give(alloc, active[k], base[k]);
      remaining -= handed;
      // Another pass redistributes what per-tcont caps blocked here.
      std::vector<std::size_t> still;
      for (std::size_t k = 0; k < active.size(); ++k) {
        cap[active[k]] -= base[k];
        if (cap[active[k]] > 0) still.push_back(active[k]);
      }
      active = std::move(still);
    }
  }

  void give(std::vector<std::int64_t>& alloc, std::size_t i,
            std::int64_t bytes) {
    alloc[i] += bytes;
    slots_[i].max_budget -= bytes * kBitNsPerByte;
  }

  OltConfig olt_;
  Nanos frame_ns_ = kDefaultFramePeriod;
  std::vector<Slot> slots_;
  std::map<int, std::size_t> index_by_id_;
  std::size_t rr_cursor_ = 0;
};

// Scenario-level feasibility: the unconditional fixed slots must fit the
// frame with their guard overhead.
inline std::vector<std::string> validate_fixed_capacity(
    const std::vector<TContProfile>& profiles, const OltConfig& olt,
    Nanos frame_ns) {
  std::vector<std::string> errs;
  std::int64_t fixed_bytes = 0;
  std::int64_t n_fixed = 0;
  std::int64_t total_fixed_bps = 0;
  for (const auto& p : profiles) {
    if (p.fixed_bps <= 0) continue;
    fixed_bytes += div_ceil(p.fixed_bps * frame_ns, kBitNsPerByte);
    ++n_fixed;
    total_fixed_bps += p.fixed_bps;
  }
  const std::int64_t capacity = olt.upstream_bps * frame_ns / kBitNsPerByte;
  const std::int64_t guard =
      div_ceil(olt.guard_ns * olt.upstream_bps, kBitNsPerByte) + 1;
  if (fixed_bytes + n_fixed * guard > capacity) {
    errs.push_back(
        "dba: total fixed bandwidth " + std::to_string(total_fixed_bps) +
        " b/s exceeds upstream frame capacity " +
        std::to_string(olt.upstream_bps) + " b/s");
  }
  return errs;
}

}  // namespace railpon
