#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "railpon/pon.hpp"
#include "railpon/time.hpp"
#include "railpon/traffic.hpp"

namespace railpon {

enum class DropCause { antispoofing, queue_cap, coverage_gap };

inline const char* drop_cause_name(DropCause c) {
  switch (c) {
    case DropCause::antispoofing: return "antispoofing";
    case DropCause::queue_cap: return "queue_cap";
    case DropCause::coverage_gap: return "coverage_gap";
  }
  return "?";
}

struct Interruption {
  Nanos start = 0;
  Nanos end = 0;
};

struct TransitionRecord {
  Nanos at = 0;
  std::vector<int> serving;
};

struct MacMoveRecord {
  Nanos at = 0;
  int from_onu = 0;
  int to_onu = 0;
};

struct FlowStats {
  FlowSpec spec;
  std::int64_t sent = 0;
  std::int64_t delivered = 0;
  std::int64_t dropped = 0;
  std::map<std::string, std::int64_t> drops_by_cause;
  std::int64_t duplicates = 0;  // extra copies of already-delivered packets
  Nanos first_send = -1;
  Nanos last_send = -1;
  std::vector<Nanos> delivery_times;         // time-ordered
  std::map<std::int64_t, std::int64_t> throughput_bits;  // bucket -> bits
  std::vector<Interruption> interruptions;   // filled at finalize

  std::int64_t in_flight() const { return sent - delivered - dropped; }
};

// Maximal delivery gaps longer than `gap_threshold` while traffic was
// still expected. Head and tail gaps count: a flow that went dark before
// the run ended reports an interval ending at `end_time`.
inline std::vector<Interruption> interruption_intervals(
    const FlowStats& f, Nanos gap_threshold, Nanos end_time) {
  std::vector<Interruption> out;
  if (f.sent == 0) return out;
  if (f.delivery_times.empty()) {
    if (end_time - f.first_send > gap_threshold)
      out.push_back({f.first_send, end_time});
    return out;
  }
  if (f.delivery_times.front() - f.first_send > gap_threshold)
    out.push_back({f.first_send, f.delivery_times.front()});
  for (std::size_t i = 1; i < f.delivery_times.size(); ++i) {
    const Nanos gap = f.delivery_times[i] - f.delivery_times[i - 1];
    if (gap > gap_threshold)
      out.push_back({f.delivery_times[i - 1], f.delivery_times[i]});
  }
  if (f.last_send > f.delivery_times.back() &&
      end_time - f.delivery_times.back() > gap_threshold)
    out.push_back({f.delivery_times.back(), end_time});
  return out;
}

// Everything one run produces. Immutable once the engine finishes; all
// serialized fields are integers so identical runs serialize to identical
// bytes.
struct RunReport {
  std::string scenario_name;
  std::uint64_t seed = 0;
  Nanos end_time = 0;
  Nanos frame_period = kDefaultFramePeriod;
  Nanos bucket_width = 100 * kNanosPerMilli;
  std::uint64_t frames = 0;
  std::vector<FlowStats> flows;
  std::int64_t violations = 0;    // anti-spoofing rejections (frame events)
  std::int64_t outages = 0;       // instants with no ONU in radio reach
  std::int64_t macs_expired = 0;
  std::vector<TransitionRecord> transitions;
  std::vector<MacMoveRecord> relearns;  // first kRelearnTraceCap binding moves
  std::int64_t relearns_total = 0;
  std::vector<BurstRecord> bursts;  // windowed by burst_trace_limit
  std::int64_t bursts_total = 0;
  std::optional<std::int64_t> doppler_max_millihz;  // set when a carrier is given
};

// Per-packet terminal bookkeeping. A packet is recorded exactly once,
// as delivered or dropped; recording it twice is a hard error because it
// means the engine double-counted.
class MetricsRecorder {
 public:
  explicit MetricsRecorder(RunReport& report) : report_(report) {}

  FlowStats& flow(int flow_id) {
    for (auto& f : report_.flows)
      if (f.spec.id == flow_id) return f;
    throw std::invalid_argument("unknown flow id " + std::to_string(flow_id));
  }

  void record_send(int flow_id, Nanos at) {
    auto& f = flow(flow_id);
    ++f.sent;
    if (f.first_send < 0) f.first_send = at;
    f.last_send = at;
  }

  void record_delivery(int flow_id, std::uint64_t packet_id, Nanos at) {
    mark_terminal(packet_id, "delivery");
    auto& f = flow(flow_id);
    ++f.delivered;
    f.delivery_times.push_back(at);
    f.throughput_bits[at / report_.bucket_width] += f.spec.packet_bytes * 8;
  }

  void record_drop(int flow_id, std::uint64_t packet_id, DropCause cause) {
    mark_terminal(packet_id, "drop");
    auto& f = flow(flow_id);
    ++f.dropped;
    ++f.drops_by_cause[drop_cause_name(cause)];
  }

  void record_duplicate(int flow_id) { ++flow(flow_id).duplicates; }

 private:
  void mark_terminal(std::uint64_t packet_id, const char* what) {
    if (!terminal_.insert(packet_id).second) {
      throw std::logic_error(std::string("packet ") +
                             std::to_string(packet_id) +
                             " recorded twice (second record: " + what + ")");
    }
  }

  RunReport& report_;
  std::unordered_set<std::uint64_t> terminal_;
};

}  // namespace railpon
