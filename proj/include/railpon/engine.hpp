#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "railpon/dba.hpp"
#include "railpon/events.hpp"
#include "railpon/mac_table.hpp"
#include "railpon/metrics.hpp"
#include "railpon/pon.hpp"
#include "railpon/radio.hpp"
#include "railpon/rng.hpp"
#include "railpon/scenario.hpp"
#include "railpon/time.hpp"
#include "railpon/traffic.hpp"

namespace railpon {

// Single-threaded deterministic run of one scenario. Separate runs share
// no state and may execute on different threads.
class Engine {
 public:
  explicit Engine(const Scenario& sc) : sc_(sc) {}

  RunReport run() {
    prepare();
    queue_.schedule(sc_.end_time, Ev{EvEnd{}});
    queue_.schedule(0, Ev{EvFrameTick{}});
    for (const auto& f : sc_.flows) {
      if (f.start < sc_.end_time)
        queue_.schedule(f.start, Ev{EvFlowSend{f.id}});
    }
    for (Nanos t : association_probe_times(sc_.onus, sc_.cell_radius_mm,
                                           sc_.overlap_mm, sc_.train,
                                           sc_.end_time)) {
      queue_.schedule(t, Ev{EvAssocProbe{}});
    }

    while (auto ev = queue_.pop()) {
      if (std::holds_alternative<EvEnd>(ev->what)) break;
      const Nanos t = ev->at;
      std::visit([&](auto&& e) { handle(e, t); }, ev->what);
    }
    finalize();
    return std::move(report_);
  }

 private:
  struct EvFlowSend { int flow_id; };
  struct EvDlArrive { int flow_id; std::uint64_t packet; int onu_id; };
  struct EvBurstArrive {
    int onu_id;
    std::vector<std::uint64_t> completed;  // packets finishing in this burst
  };
  struct EvFrameTick {};
  struct EvMacExpiry { MacAddr mac; };
  struct EvAssocProbe {};
  struct EvEnd {};
  using Ev = std::variant<EvFlowSend, EvDlArrive, EvBurstArrive, EvFrameTick,
                          EvMacExpiry, EvAssocProbe, EvEnd>;

  struct PacketFate {
    int flow_id = 0;
    int alive_copies = 0;
    bool delivered = false;
  };

  void prepare() {
    report_ = RunReport{};
    report_.scenario_name = sc_.name;
    report_.seed = sc_.seed;
    report_.end_time = sc_.end_time;
    report_.frame_period = sc_.frame_period;
    report_.bucket_width = sc_.bucket_width;
    for (const auto& f : sc_.flows) {
      FlowStats st;
      st.spec = f;
      report_.flows.push_back(std::move(st));
    }
    recorder_ = std::make_unique<MetricsRecorder>(report_);

    onus_ = sc_.onus;
    for (auto& onu : onus_) {
      range_onu(onu, sc_.olt.max_fiber_mm, sc_.olt.group_index);
      dl_delay_[onu.id] = propagation_delay_ns(onu.fiber_mm, sc_.olt.group_index);
    }
    dba_ = std::make_unique<DbaScheduler>(sc_.tconts, sc_.olt, sc_.frame_period);
    mac_ = std::make_unique<MacTable>(sc_.aging_time);
    for (const auto& f : sc_.flows)
      flow_rng_.emplace(f.id, DetRng(sc_.seed).fork(static_cast<std::uint64_t>(f.id)));

    assoc_ = update_association(onus_, sc_.train.pos_num(0), sc_.cell_radius_mm,
                                sc_.overlap_mm);
    report_.transitions.push_back({0, assoc_.serving});
    if (assoc_.serving.empty()) ++report_.outages;
    refresh_window(0);
  }

  // --- policy helpers -------------------------------------------------

  WhitelistPolicy policy_at(Nanos t) const {
    WhitelistPolicy p;
    p.mode = sc_.mode;
    p.window = window_;
    if (suppress_onu_ != 0 && t < suppress_until_)
      p.deferred_move_target = suppress_onu_;
    return p;
  }

  std::vector<int> flood_set() const {
    if (sc_.mode == WhitelistMode::window3) return window_;
    std::vector<int> all;
    for (const auto& o : onus_)
      if (o.active) all.push_back(o.id);
    return all;
  }

  int nearest_onu(Nanos t) const {
    const __int128 pos = sc_.train.pos_num(t);
    const OnuNode* best = nullptr;
    __int128 best_d = 0;
    for (const auto& o : onus_) {
      if (!o.active) continue;
      __int128 d = static_cast<__int128>(o.track_mm) * kNanosPerSec - pos;
      if (d < 0) d = -d;
      if (!best || d < best_d) {
        best = &o;
        best_d = d;
      }
    }
    return best ? best->id : 0;
  }

  void refresh_window(Nanos t) { window_ = window_around(onus_, nearest_onu(t)); }

  bool covered(int onu_id, Nanos t) const {
    for (const auto& o : onus_) {
      if (o.id != onu_id) continue;
      if (!o.active) return false;
      __int128 d = static_cast<__int128>(o.track_mm) * kNanosPerSec -
                   sc_.train.pos_num(t);
      if (d < 0) d = -d;
      return d <= static_cast<__int128>(sc_.cell_radius_mm) * kNanosPerSec;
    }
    return false;
  }

  const OnuNode& onu_by_id(int id) const {
    for (const auto& o : onus_)
      if (o.id == id) return o;
    throw std::logic_error("unknown onu id");
  }

  // --- event handlers -------------------------------------------------

  void handle(const EvFlowSend& e, Nanos t) {
    const FlowSpec& spec = recorder_->flow(e.flow_id).spec;
    const std::uint64_t pkt = next_packet_id_++;
    recorder_->record_send(e.flow_id, t);

    if (spec.direction == Direction::downstream) {
      auto dests = mac_->forward(sc_.train.mac, t, flood_set());
      if (dests.empty()) {
        recorder_->record_drop(e.flow_id, pkt, DropCause::coverage_gap);
      } else {
        fates_[pkt] = PacketFate{e.flow_id, static_cast<int>(dests.size()), false};
        for (int onu : dests)
          queue_.schedule(t + dl_delay_.at(onu), Ev{EvDlArrive{e.flow_id, pkt, onu}});
      }
    } else {
      const Association serving = update_association(
          onus_, sc_.train.pos_num(t), sc_.cell_radius_mm, sc_.overlap_mm);
      if (serving.serving.empty()) {
        recorder_->record_drop(e.flow_id, pkt, DropCause::coverage_gap);
      } else {
        int accepted = 0;
        for (int onu : serving.serving) {
          const TContProfile* prof = tcont_for(onu, spec.tcont_label);
          if (!prof) continue;  // validated; cannot happen
          if (dba_->queue(prof->id).enqueue(pkt, spec.packet_bytes, t,
                                            prof->queue_cap_packets))
            ++accepted;
        }
        if (accepted == 0) {
          recorder_->record_drop(e.flow_id, pkt, DropCause::queue_cap);
        } else {
          fates_[pkt] = PacketFate{e.flow_id, accepted, false};
        }
      }
    }

    const Nanos next = t + next_gap_ns(spec, flow_rng_.at(e.flow_id));
    if (next < sc_.end_time) queue_.schedule(next, Ev{EvFlowSend{e.flow_id}});
  }

  void handle(const EvDlArrive& e, Nanos t) {
    auto it = fates_.find(e.packet);
    if (it == fates_.end()) return;
    PacketFate& fate = it->second;
    if (covered(e.onu_id, t)) {
      if (!fate.delivered) {
        recorder_->record_delivery(e.flow_id, e.packet, t);
        fate.delivered = true;
      } else {
        recorder_->record_duplicate(e.flow_id);
      }
    }
    finish_copy(it, DropCause::coverage_gap);
  }

  void handle(const EvFrameTick&, Nanos t) {
    ++report_.frames;
    GrantTable table = dba_->grant_frame(report_.frames - 1, t);
    for (const auto& entry : table.entries) {
      const TContProfile& prof = dba_->profile(entry.tcont_id);
      auto taken = dba_->queue(entry.tcont_id).take(entry.grant_bytes, t);
      if (taken.bytes <= 0) continue;  // idle slot: airtime reserved, no payload
      const OnuNode& onu = onu_by_id(prof.owner_onu);
      BurstRecord burst =
          upstream_burst_arrival(onu, t + entry.start_offset, entry.grant_bytes, sc_.olt);
      burst.tcont_id = prof.id;
      burst.bytes_carried = taken.bytes;
      ++report_.bursts_total;
      if (static_cast<std::int64_t>(report_.bursts.size()) < sc_.burst_trace_limit)
        report_.bursts.push_back(burst);
      queue_.schedule(burst.start, Ev{EvBurstArrive{onu.id, std::move(taken.completed)}});
    }
    const Nanos next = t + sc_.frame_period;
    if (next < sc_.end_time) queue_.schedule(next, Ev{EvFrameTick{}});
  }

  void handle(const EvBurstArrive& e, Nanos t) {
    for (std::uint64_t pkt : e.completed) {
      auto it = fates_.find(pkt);
      if (it == fates_.end()) continue;
      const int flow_id = it->second.flow_id;

      const BindingSnapshot before = snapshot(sc_.train.mac);
      const LearnOutcome outcome =
          mac_->learn(sc_.train.mac, e.onu_id, t, policy_at(t));
      if (outcome == LearnOutcome::rejected) {
        ++report_.violations;
        finish_copy(it, DropCause::antispoofing);
        continue;
      }
      if (outcome == LearnOutcome::learned || outcome == LearnOutcome::moved) {
        if (!before.valid || before.onu != e.onu_id) {
          ++report_.relearns_total;
          if (static_cast<std::int64_t>(report_.relearns.size()) < kRelearnTraceCap)
            report_.relearns.push_back(
                {t, before.valid ? before.onu : 0, e.onu_id});
        }
        arm_expiry(sc_.train.mac, t);
      } else if (outcome == LearnOutcome::refreshed) {
        arm_expiry(sc_.train.mac, t);
      }
      PacketFate& fate = it->second;
      if (!fate.delivered) {
        recorder_->record_delivery(flow_id, pkt, t);
        fate.delivered = true;
      } else {
        recorder_->record_duplicate(flow_id);
      }
      finish_copy(it, DropCause::antispoofing);
    }
  }

  void handle(const EvMacExpiry& e, Nanos t) {
    expiry_armed_.erase(e.mac);
    const MacTable::Entry* entry = mac_->find(e.mac);
    if (!entry) return;
    if (!mac_->fresh(*entry, t)) {
      report_.macs_expired +=
          static_cast<std::int64_t>(mac_->age_scan(t).size());
    } else {
      arm_expiry(e.mac, entry->last_seen);
    }
  }

  void handle(const EvAssocProbe&, Nanos t) {
    Association now = update_association(onus_, sc_.train.pos_num(t),
                                         sc_.cell_radius_mm, sc_.overlap_mm);
    if (now == assoc_) return;
    if (now.serving.empty() && !assoc_.serving.empty()) ++report_.outages;
    // Fixed-delay relearn: binding moves toward a newly joined ONU are
    // deferred while the transition is in progress.
    if (sc_.relearn == RelearnTrigger::fixed_delay) {
      for (int onu : now.serving) {
        if (!assoc_.contains(onu)) {
          suppress_onu_ = onu;
          suppress_until_ = t + sc_.relearn_delay;
        }
      }
      if (now.serving.size() == 1) {
        // Transition over: the survivor must be able to take the binding.
        if (suppress_onu_ == now.serving.front()) suppress_onu_ = 0;
      }
    }
    assoc_ = now;
    report_.transitions.push_back({t, assoc_.serving});
    refresh_window(t);
  }

  void handle(const EvEnd&, Nanos) {}

  // --- bookkeeping ----------------------------------------------------

  struct BindingSnapshot {
    bool valid = false;
    int onu = 0;
  };
  BindingSnapshot snapshot(MacAddr mac) const {
    if (const auto* e = mac_->find(mac)) return {true, e->onu};
    return {};
  }

  void arm_expiry(MacAddr mac, Nanos last_seen) {
    if (expiry_armed_.count(mac)) return;
    const Nanos at = last_seen + sc_.aging_time;
    if (at >= sc_.end_time) return;
    expiry_armed_.insert(mac);
    queue_.schedule(at, Ev{EvMacExpiry{mac}});
  }

  void finish_copy(std::unordered_map<std::uint64_t, PacketFate>::iterator it,
                   DropCause cause_if_dead) {
    PacketFate& fate = it->second;
    if (--fate.alive_copies <= 0) {
      if (!fate.delivered)
        recorder_->record_drop(fate.flow_id, it->first, cause_if_dead);
      fates_.erase(it);
    }
  }

  const TContProfile* tcont_for(int onu_id, const std::string& label) const {
    for (std::size_t i = 0; i < dba_->size(); ++i) {
      const TContProfile& p = dba_->profile_at(i);
      if (p.owner_onu == onu_id && p.label == label) return &p;
    }
    return nullptr;
  }

  void finalize() {
    for (auto& f : report_.flows) {
      const Nanos nominal = nominal_gap_ns(f.spec);
      // Upstream deliveries are quantized to frame boundaries, so the
      // spec's plain 2x nominal gap would misfire for gaps shorter than
      // a frame; use 2 * max(gap, frame).
      const Nanos threshold = 2 * std::max(nominal, sc_.frame_period);
      f.interruptions = interruption_intervals(f, threshold, sc_.end_time);
    }
    if (sc_.carrier_hz) {
      const double shift = doppler_shift(
          static_cast<double>(sc_.train.speed_mm_s) / 1000.0,
          static_cast<double>(*sc_.carrier_hz), 1.0);
      report_.doppler_max_millihz = std::llround(shift * 1000.0);
    }
  }

  Scenario sc_;
  EventQueue<Ev> queue_;
  RunReport report_;
  std::unique_ptr<MetricsRecorder> recorder_;
  std::unique_ptr<DbaScheduler> dba_;
  std::unique_ptr<MacTable> mac_;
  std::vector<OnuNode> onus_;
  std::map<int, Nanos> dl_delay_;
  std::map<int, DetRng> flow_rng_;
  std::unordered_map<std::uint64_t, PacketFate> fates_;
  std::set<MacAddr> expiry_armed_;
  Association assoc_;
  std::vector<int> window_;
  int suppress_onu_ = 0;
  Nanos suppress_until_ = 0;
  std::uint64_t next_packet_id_ = 1;

  static constexpr std::int64_t kRelearnTraceCap = 1000;
};

inline RunReport run_scenario(const Scenario& sc) { return Engine(sc).run(); }

}  // namespace railpon
