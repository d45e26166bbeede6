#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "railpon/time.hpp"

namespace railpon {

using MacAddr = std::uint64_t;  // low 48 bits

inline std::optional<MacAddr> parse_mac(const std::string& text) {
  if (text.size() != 17) return std::nullopt;
  MacAddr mac = 0;
  for (int i = 0; i < 6; ++i) {
    if (i > 0 && text[i * 3 - 1] != ':') return std::nullopt;
    auto nib = [&](char c) -> int {
      if (c >= '0' && c <= '9') return c - '0';
      if (c >= 'a' && c <= 'f') return c - 'a' + 10;
      if (c >= 'A' && c <= 'F') return c - 'A' + 10;
      return -1;
    };
    int hi = nib(text[i * 3]), lo = nib(text[i * 3 + 1]);
    if (hi < 0 || lo < 0) return std::nullopt;
    mac = (mac << 8) | static_cast<MacAddr>(hi * 16 + lo);
  }
  return mac;
}

inline std::string format_mac(MacAddr mac) {
  char buf[18];
  std::snprintf(buf, sizeof buf, "%02x:%02x:%02x:%02x:%02x:%02x",
                unsigned(mac >> 40 & 0xff), unsigned(mac >> 32 & 0xff),
                unsigned(mac >> 24 & 0xff), unsigned(mac >> 16 & 0xff),
                unsigned(mac >> 8 & 0xff), unsigned(mac & 0xff));
  return buf;
}

enum class WhitelistMode { strict_antispoofing, window3 };

// Anti-spoofing policy applied to MAC moves. In window3 mode a move is
// legal when the new port is inside the sliding three-ONU whitelist
// (previous/current/next along the track); in strict mode every move is a
// violation until the stale binding ages out.
struct WhitelistPolicy {
  WhitelistMode mode = WhitelistMode::window3;
  std::vector<int> window;  // 3 consecutive track-ordered ONU ids (2 at ends)
  // While set, binding moves to this ONU are deferred (the fixed-delay
  // relearn trigger); frames still forward.
  std::optional<int> deferred_move_target;

  bool in_window(int onu) const {
    return std::find(window.begin(), window.end(), onu) != window.end();
  }
};

enum class LearnOutcome {
  learned,    // fresh entry created
  refreshed,  // same port, timestamp updated
  moved,      // binding moved to a new port
  deferred,   // move suppressed by the relearn trigger; frame forwards
  rejected,   // anti-spoofing violation; frame dropped
};

class MacTable {
 public:
  explicit MacTable(Nanos aging_ns) : aging_(aging_ns) {}

  struct Entry {
    int onu = 0;
    Nanos last_seen = 0;
  };

  Nanos aging() const { return aging_; }
  std::size_t size() const { return map_.size(); }

  bool fresh(const Entry& e, Nanos now) const {
    return now - e.last_seen < aging_;
  }

  const Entry* find(MacAddr mac) const {
    auto it = map_.find(mac);
    return it == map_.end() ? nullptr : &it->second;
  }

  // Source learning on an uplink frame. An entry that has reached its
  // aging time is treated as absent regardless of whether the periodic
  // scan removed it yet, so learn/expiry ordering at equal timestamps
  // cannot change behavior.
  LearnOutcome learn(MacAddr mac, int onu, Nanos now,
                     const WhitelistPolicy& policy) {
    auto it = map_.find(mac);
    if (it == map_.end() || !fresh(it->second, now)) {
      map_[mac] = Entry{onu, now};
      return LearnOutcome::learned;
    }
    Entry& e = it->second;
    if (e.onu == onu) {
      e.last_seen = now;
      return LearnOutcome::refreshed;
    }
    if (policy.mode == WhitelistMode::strict_antispoofing ||
        !policy.in_window(onu)) {
      return LearnOutcome::rejected;
    }
    if (policy.deferred_move_target && *policy.deferred_move_target == onu) {
      return LearnOutcome::deferred;
    }
    e = Entry{onu, now};
    return LearnOutcome::moved;
  }

  // Removes every entry with now - last_seen >= aging; returns the macs.
  std::vector<MacAddr> age_scan(Nanos now) {
    std::vector<MacAddr> expired;
    for (auto it = map_.begin(); it != map_.end();) {
      if (!fresh(it->second, now)) {
        expired.push_back(it->first);
        it = map_.erase(it);
      } else {
        ++it;
      }
    }
    return expired;
  }

  // Destination lookup: unicast to a fresh binding, flood otherwise.
  std::vector<int> forward(MacAddr mac, Nanos now,
                           const std::vector<int>& flood_set) const {
    if (const Entry* e = find(mac); e && fresh(*e, now)) return {e->onu};
    return flood_set;
  }

 private:
  std::map<MacAddr, Entry> map_;
  Nanos aging_;
};

}  // namespace railpon
