#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "railpon/rng.hpp"
#include "railpon/time.hpp"

namespace railpon {

enum class Direction { downstream, upstream };

// One constant-bit-rate datagram stream between the core and the train.
struct FlowSpec {
  int id = 0;
  Direction direction = Direction::downstream;
  std::int64_t packet_bytes = 1200;
  std::int64_t rate_bps = 100'000'000;
  double jitter = 0.0;       // fraction of the nominal gap, uniform +/-
  std::string tcont_label;   // upstream only: tcont class carrying the flow
  Nanos start = 0;           // first send instant (phase offset)
};

inline Nanos nominal_gap_ns(const FlowSpec& f) {
  return div_round_half_up(f.packet_bytes * 8 * kNanosPerSec, f.rate_bps);
}

// Gap to the next packet: the nominal inter-packet gap, jittered
// uniformly within +/- jitter * gap. jitter == 0 is exactly periodic.
inline Nanos next_gap_ns(const FlowSpec& f, DetRng& rng) {
  const Nanos gap = nominal_gap_ns(f);
  if (f.jitter <= 0.0) return gap;
  const Nanos amp = static_cast<Nanos>(
      std::llround(f.jitter * static_cast<double>(gap)));
  if (amp <= 0) return gap;
  return gap + rng.next_in(-amp, amp);
}

inline std::vector<std::string> validate_flow(const FlowSpec& f) {
  std::vector<std::string> errs;
  auto tag = [&](const std::string& m) {
    errs.push_back("flow " + std::to_string(f.id) + ": " + m);
  };
  if (f.packet_bytes < 64) tag("packet size must be at least 64B");
  if (f.rate_bps <= 0) tag("rate must be positive");
  if (f.jitter < 0.0 || f.jitter > 1.0) tag("jitter must be within [0, 1]");
  if (f.start < 0) tag("start offset must be non-negative");
  if (f.direction == Direction::upstream && f.tcont_label.empty())
    tag("upstream flows must name a tcont");
  if (f.direction == Direction::downstream && !f.tcont_label.empty())
    tag("downstream flows must not name a tcont");
  return errs;
}

}  // namespace railpon
