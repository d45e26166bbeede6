#pragma once

#include <cstdint>
#include <optional>
#include <queue>
#include <stdexcept>
#include <utility>
#include <vector>

#include "railpon/time.hpp"

namespace railpon {

// Thrown when an event is scheduled behind the clock: that is always a
// simulation bug, never a recoverable condition.
class SchedulingError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

template <typename Payload>
struct Event {
  Nanos at = 0;
  std::uint64_t seq = 0;  // tie-break: equal timestamps dequeue in schedule order
  Payload what;
};

// Min-heap keyed on (at, seq). The explicit sequence counter makes the
// dequeue order a strict total order, which the determinism contract
// (byte-identical reports for identical inputs) depends on.
template <typename Payload>
class EventQueue {
 public:
  void schedule(Nanos at, Payload what) {
    if (at < now_) {
      throw SchedulingError("event scheduled in the past: at=" +
                            std::to_string(at) + " now=" + std::to_string(now_));
    }
    heap_.push(Event<Payload>{at, next_seq_++, std::move(what)});
  }

  std::optional<Event<Payload>> pop() {
    if (heap_.empty()) return std::nullopt;
    Event<Payload> ev = std::move(const_cast<Event<Payload>&>(heap_.top()));
    heap_.pop();
    now_ = ev.at;
    return ev;
  }

  Nanos now() const { return now_; }
  bool empty() const { return heap_.empty(); }
  std::size_t size() const { return heap_.size(); }

 private:
  struct Later {
    bool operator()(const Event<Payload>& a, const Event<Payload>& b) const {
      if (a.at != b.at) return a.at > b.at;
      return a.seq > b.seq;
    }
  };
  std::priority_queue<Event<Payload>, std::vector<Event<Payload>>, Later> heap_;
  Nanos now_ = 0;
  std::uint64_t next_seq_ = 0;
};

}  // namespace railpon
