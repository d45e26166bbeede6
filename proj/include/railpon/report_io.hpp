#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "railpon/metrics.hpp"

namespace railpon {

// Report schema "railpon-report/1", documented in docs/report-schema.md.
// Every field is an integer or a string, so serialization is byte-stable
// across runs and platforms.
inline nlohmann::ordered_json report_to_json(const RunReport& r) {
  using json = nlohmann::ordered_json;
  json j;
  j["schema"] = "railpon-report/1";
  j["scenario"] = r.scenario_name;
  j["seed"] = r.seed;
  j["end_time_ns"] = r.end_time;
  j["frame_period_ns"] = r.frame_period;
  j["bucket_ns"] = r.bucket_width;
  j["frames"] = r.frames;
  j["violations"] = r.violations;
  j["outages"] = r.outages;
  j["macs_expired"] = r.macs_expired;
  if (r.doppler_max_millihz)
    j["doppler_max_millihz"] = *r.doppler_max_millihz;

  json flows = json::array();
  for (const auto& f : r.flows) {
    json jf;
    jf["id"] = f.spec.id;
    jf["direction"] =
        f.spec.direction == Direction::downstream ? "downstream" : "upstream";
    jf["packet_bytes"] = f.spec.packet_bytes;
    jf["rate_bps"] = f.spec.rate_bps;
    jf["sent"] = f.sent;
    jf["delivered"] = f.delivered;
    jf["dropped"] = f.dropped;
    jf["in_flight"] = f.in_flight();
    jf["duplicates"] = f.duplicates;
    json causes = json::object();
    for (const auto& [cause, n] : f.drops_by_cause) causes[cause] = n;
    jf["drops_by_cause"] = causes;
    json ints = json::array();
    for (const auto& iv : f.interruptions)
      ints.push_back({{"start_ns", iv.start}, {"end_ns", iv.end}});
    jf["interruptions"] = ints;
    flows.push_back(jf);
  }
  j["flows"] = flows;

  json transitions = json::array();
  for (const auto& tr : r.transitions)
    transitions.push_back({{"at_ns", tr.at}, {"serving", tr.serving}});
  j["transitions"] = transitions;

  json relearns = json::array();
  for (const auto& m : r.relearns)
    relearns.push_back(
        {{"at_ns", m.at}, {"from_onu", m.from_onu}, {"to_onu", m.to_onu}});
  j["relearns"] = relearns;
  j["relearns_total"] = r.relearns_total;
  j["bursts_recorded"] = static_cast<std::int64_t>(r.bursts.size());
  j["bursts_total"] = r.bursts_total;
  return j;
}

inline std::string report_json_text(const RunReport& r) {
  return report_to_json(r).dump(2) + "\n";
}

// throughput.csv: one row per (flow, bucket) with delivered bits.
inline std::string throughput_csv(const RunReport& r) {
  std::ostringstream out;
  out << "flow_id,bucket_start_ns,bits\n";
  for (const auto& f : r.flows) {
    for (const auto& [bucket, bits] : f.throughput_bits)
      out << f.spec.id << ',' << bucket * r.bucket_width << ',' << bits << '\n';
  }
  return out.str();
}

// bursts.csv: the recorded upstream burst trace (first burst_trace_limit
// payload-carrying bursts).
inline std::string bursts_csv(const RunReport& r) {
  std::ostringstream out;
  out << "onu_id,tcont_id,start_ns,duration_ns,bytes_carried\n";
  for (const auto& b : r.bursts) {
    out << b.onu_id << ',' << b.tcont_id << ',' << b.start << ',' << b.duration
        << ',' << b.bytes_carried << '\n';
  }
  return out.str();
}

inline bool write_file(const std::string& path, const std::string& content,
                       std::string* err = nullptr) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    if (err) *err = "cannot open for writing: " + path;
    return false;
  }
  out << content;
  out.close();
  if (!out) {
    if (err) *err = "write failed: " + path;
    return false;
  }
  return true;
}

}  // namespace railpon
