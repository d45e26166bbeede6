#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "railpon/dba.hpp"
#include "railpon/mac_table.hpp"
#include "railpon/pon.hpp"
#include "railpon/radio.hpp"
#include "railpon/time.hpp"
#include "railpon/traffic.hpp"
#include "railpon/units.hpp"

namespace railpon {

enum class RelearnTrigger { on_first_uplink_frame, fixed_delay };

// Fully validated description of one run: topology, train, policies,
// DBA profiles, traffic, and run controls.
struct Scenario {
  std::string name;

  // [run]
  std::uint64_t seed = 0;
  Nanos end_time = 0;
  Nanos frame_period = kDefaultFramePeriod;
  Nanos bucket_width = 100 * kNanosPerMilli;
  std::int64_t burst_trace_limit = 10'000;

  // [topology]
  std::vector<OnuNode> onus;  // sorted by track position, ids 1..n
  OltConfig olt;
  std::int64_t cell_radius_mm = 0;

  // [train]
  TrainMotion train;
  std::optional<std::int64_t> carrier_hz;  // enables the Doppler metric

  // [policies]
  WhitelistMode mode = WhitelistMode::window3;
  Nanos aging_time = 20 * kNanosPerSec;
  std::int64_t overlap_mm = 500'000;
  RelearnTrigger relearn = RelearnTrigger::on_first_uplink_frame;
  Nanos relearn_delay = 0;

  std::vector<TContProfile> tconts;
  std::vector<FlowSpec> flows;
};

// ---------------------------------------------------------------------------
// Raw key/value tree. Parsing stops at syntax; all semantic checking runs
// over the complete tree so a single pass reports every problem at once.

struct RawScenario {
  std::map<std::string, std::map<std::string, std::string>> sections;
  std::map<int, std::map<std::string, std::string>> tconts;
  std::map<int, std::map<std::string, std::string>> flows;
};

namespace scenario_detail {

inline std::string trim(std::string s) {
  const char* ws = " \t\r";
  auto b = s.find_first_not_of(ws);
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

}  // namespace scenario_detail

inline bool parse_raw_scenario(std::istream& in, RawScenario& raw,
                               std::vector<std::string>& errors) {
  using scenario_detail::trim;
  std::string line;
  std::string section;
  int instance = -1;  // tcont/flow id when inside an instance section
  int lineno = 0;
  bool any_content = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    any_content = true;
    if (line.front() == '[') {
      if (line.back() != ']') {
        errors.push_back("line " + std::to_string(lineno) +
                         ": unterminated section header");
        continue;
      }
      std::string head = trim(line.substr(1, line.size() - 2));
      std::stringstream hs(head);
      std::string kind;
      hs >> kind;
      int id = 0;
      if (kind == "tcont" || kind == "flow") {
        if (!(hs >> id) || id <= 0) {
          errors.push_back("line " + std::to_string(lineno) + ": section [" +
                           head + "] needs a positive integer id");
          section.clear();
          instance = -1;
          continue;
        }
        section = kind;
        instance = id;
        auto& store = kind == "tcont" ? raw.tconts : raw.flows;
        if (!store.emplace(id, std::map<std::string, std::string>{}).second) {
          errors.push_back("line " + std::to_string(lineno) + ": duplicate [" +
                           head + "]");
        }
      } else {
        section = kind;
        instance = -1;
        raw.sections.emplace(section, std::map<std::string, std::string>{});
      }
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      errors.push_back("line " + std::to_string(lineno) +
                       ": expected 'key = value'");
      continue;
    }
    if (section.empty()) {
      errors.push_back("line " + std::to_string(lineno) +
                       ": key outside any [section]");
      continue;
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      errors.push_back("line " + std::to_string(lineno) +
                       ": empty key or value");
      continue;
    }
    auto* kv = instance < 0 ? &raw.sections[section]
               : section == "tcont" ? &raw.tconts[instance]
                                    : &raw.flows[instance];
    if (!kv->emplace(key, value).second) {
      errors.push_back("line " + std::to_string(lineno) + ": duplicate key '" +
                       key + "' in [" + section + "]");
    }
  }
  if (!any_content) errors.push_back("scenario file is empty");
  return errors.empty();
}

// Dotted-path override applied to the raw tree before materialization:
// `policies.mode=...`, `tcont.1.fixed=...`, `flow.2.rate=...`.
inline bool apply_override(RawScenario& raw, const std::string& path,
                           const std::string& value, std::string& error) {
  std::vector<std::string> parts;
  std::stringstream ss(path);
  std::string part;
  while (std::getline(ss, part, '.')) parts.push_back(part);
  if (parts.size() == 2) {
    auto it = raw.sections.find(parts[0]);
    if (it == raw.sections.end()) {
      error = "override path '" + path + "': no section [" + parts[0] + "]";
      return false;
    }
    it->second[parts[1]] = value;
    return true;
  }
  if (parts.size() == 3 && (parts[0] == "tcont" || parts[0] == "flow")) {
    int id = 0;
    try {
      id = std::stoi(parts[1]);
    } catch (...) {
      error = "override path '" + path + "': bad instance id";
      return false;
    }
    auto& store = parts[0] == "tcont" ? raw.tconts : raw.flows;
    auto it = store.find(id);
    if (it == store.end()) {
      error = "override path '" + path + "': no [" + parts[0] + " " +
              parts[1] + "]";
      return false;
    }
    it->second[parts[2]] = value;
    return true;
  }
  error = "override path '" + path +
          "': expected section.key or tcont.N.key / flow.N.key";
  return false;
}

// ---------------------------------------------------------------------------
// Materialization + validation. Returns every error, not just the first.

namespace scenario_detail {

class Reader {
 public:
  Reader(const std::map<std::string, std::string>& kv, std::string where,
         std::vector<std::string>& errors)
      : kv_(kv), where_(std::move(where)), errors_(errors) {}

  template <typename Parser>
  auto get(const std::string& key, Parser parser)
      -> decltype(parser(std::string{}, nullptr)) {
    seen_.insert(key);
    auto it = kv_.find(key);
    if (it == kv_.end()) return std::nullopt;
    std::string err;
    auto v = parser(it->second, &err);
    if (!v) errors_.push_back(where_ + "." + key + ": " + err);
    return v;
  }

  std::optional<std::string> get_string(const std::string& key) {
    seen_.insert(key);
    auto it = kv_.find(key);
    if (it == kv_.end()) return std::nullopt;
    return it->second;
  }

  void reject_unknown() {
    for (const auto& [k, v] : kv_) {
      if (!seen_.count(k))
        errors_.push_back(where_ + ": unknown key '" + k + "'");
    }
  }

 private:
  const std::map<std::string, std::string>& kv_;
  std::string where_;
  std::vector<std::string>& errors_;
  std::set<std::string> seen_;
};

inline auto dur() {
  return [](const std::string& s, std::string* e) { return parse_duration_ns(s, e); };
}
inline auto len() {
  return [](const std::string& s, std::string* e) { return parse_length_mm(s, e); };
}
inline auto rate() {
  return [](const std::string& s, std::string* e) { return parse_rate_bps(s, e); };
}
inline auto bytes() {
  return [](const std::string& s, std::string* e) { return parse_bytes(s, e); };
}
inline auto speed() {
  return [](const std::string& s, std::string* e) { return parse_speed_mm_s(s, e); };
}
inline auto freq() {
  return [](const std::string& s, std::string* e) { return parse_frequency_hz(s, e); };
}
inline auto plain() {
  return [](const std::string& s, std::string* e) { return parse_plain(s, e); };
}
inline auto integer() {
  return [](const std::string& s, std::string* e) -> std::optional<std::int64_t> {
    auto d = units::parse_decimal(s);
    if (!d || d->frac_digits != 0) {
      if (e) *e = "expected an integer, got '" + s + "'";
      return std::nullopt;
    }
    return d->mantissa;
  };
}

}  // namespace scenario_detail

inline std::optional<Scenario> materialize_scenario(
    const RawScenario& raw, const std::string& name,
    std::vector<std::string>& errors) {
  using namespace scenario_detail;
  Scenario sc;
  sc.name = name;
  const std::map<std::string, std::string> empty;

  static const std::set<std::string> known_sections = {
      "run", "topology", "train", "policies"};
  for (const auto& [sec, kv] : raw.sections) {
    if (!known_sections.count(sec))
      errors.push_back("unknown section [" + sec + "]");
  }

  auto section = [&](const char* s) -> const std::map<std::string, std::string>& {
    auto it = raw.sections.find(s);
    return it == raw.sections.end() ? empty : it->second;
  };

  {
    Reader r(section("run"), "run", errors);
    if (auto v = r.get("seed", integer())) sc.seed = static_cast<std::uint64_t>(*v);
    if (auto v = r.get("end_time", dur())) sc.end_time = *v;
    if (auto v = r.get("frame_period", dur())) sc.frame_period = *v;
    if (auto v = r.get("bucket", dur())) sc.bucket_width = *v;
    if (auto v = r.get("burst_trace_limit", integer())) sc.burst_trace_limit = *v;
    r.reject_unknown();
    if (sc.end_time <= 0) errors.push_back("run.end_time: must be positive");
    if (sc.frame_period <= 0) errors.push_back("run.frame_period: must be positive");
    if (sc.bucket_width <= 0) errors.push_back("run.bucket: must be positive");
  }

  {
    Reader r(section("topology"), "topology", errors);
    auto count = r.get("onus", integer());
    auto positions = r.get_string("onu_positions");
    auto spacing = r.get("onu_spacing", len());
    auto first = r.get("first_onu", len());
    auto fibers = r.get_string("onu_fibers");
    auto olt_pos = r.get("olt_track_position", len());
    auto slack = r.get("fiber_slack", len());
    if (auto v = r.get("group_index", plain())) sc.olt.group_index = *v;
    if (auto v = r.get("max_fiber", len())) sc.olt.max_fiber_mm = *v;
    if (auto v = r.get("guard_time", dur())) sc.olt.guard_ns = *v;
    if (auto v = r.get("downstream_rate", rate())) sc.olt.downstream_bps = *v;
    if (auto v = r.get("upstream_rate", rate())) sc.olt.upstream_bps = *v;
    if (auto v = r.get("cell_radius", len())) sc.cell_radius_mm = *v;
    r.reject_unknown();

    int n = count ? static_cast<int>(*count) : 0;
    if (n <= 0) {
      errors.push_back("topology.onus: need at least one ONU");
    } else {
      std::vector<std::int64_t> pos_mm;
      if (positions) {
        for (const auto& item : split_list(*positions)) {
          std::string err;
          if (auto v = parse_length_mm(item, &err)) pos_mm.push_back(*v);
          else errors.push_back("topology.onu_positions: " + err);
        }
        if (static_cast<int>(pos_mm.size()) != n && !pos_mm.empty())
          errors.push_back("topology.onu_positions: expected " +
                           std::to_string(n) + " entries");
      } else if (spacing) {
        std::int64_t p0 = first.value_or(0);
        for (int k = 0; k < n; ++k) pos_mm.push_back(p0 + k * *spacing);
      } else {
        errors.push_back("topology: need onu_positions or onu_spacing");
      }
      for (std::size_t i = 1; i < pos_mm.size(); ++i) {
        if (pos_mm[i] <= pos_mm[i - 1]) {
          errors.push_back("topology: ONU positions must strictly increase");
          break;
        }
      }

      std::vector<std::int64_t> fib_mm;
      if (fibers) {
        for (const auto& item : split_list(*fibers)) {
          std::string err;
          if (auto v = parse_length_mm(item, &err)) fib_mm.push_back(*v);
          else errors.push_back("topology.onu_fibers: " + err);
        }
        if (static_cast<int>(fib_mm.size()) != n && !fib_mm.empty())
          errors.push_back("topology.onu_fibers: expected " +
                           std::to_string(n) + " entries");
      } else if (olt_pos && static_cast<int>(pos_mm.size()) == n) {
        for (auto p : pos_mm) {
          const std::int64_t d = p >= *olt_pos ? p - *olt_pos : *olt_pos - p;
          fib_mm.push_back(d + slack.value_or(0));
        }
      } else if (!pos_mm.empty()) {
        errors.push_back("topology: need onu_fibers or olt_track_position");
      }

      if (static_cast<int>(pos_mm.size()) == n &&
          static_cast<int>(fib_mm.size()) == n) {
        for (int k = 0; k < n; ++k) {
          OnuNode onu;
          onu.id = k + 1;
          onu.track_mm = pos_mm[k];
          onu.fiber_mm = fib_mm[k];
          sc.onus.push_back(onu);
          if (onu.fiber_mm < 0)
            errors.push_back("topology: fiber length must be >= 0");
          if (onu.fiber_mm > sc.olt.max_fiber_mm)
            errors.push_back("topology: onu " + std::to_string(onu.id) +
                             " fiber exceeds max_fiber (ranging would fail)");
        }
      }
    }
    if (sc.cell_radius_mm <= 0)
      errors.push_back("topology.cell_radius: must be positive");
    if (sc.olt.group_index < 1.0)
      errors.push_back("topology.group_index: must be >= 1");
    if (sc.olt.guard_ns < 0)
      errors.push_back("topology.guard_time: must be >= 0");
    if (sc.olt.downstream_bps <= 0 || sc.olt.upstream_bps <= 0)
      errors.push_back("topology: PON rates must be positive");
    // Coverage feasibility: adjacent cells must at least touch.
    for (std::size_t i = 1; i < sc.onus.size(); ++i) {
      if (sc.onus[i].track_mm - sc.onus[i - 1].track_mm > 2 * sc.cell_radius_mm) {
        errors.push_back(
            "topology: gap between onu " + std::to_string(sc.onus[i - 1].id) +
            " and onu " + std::to_string(sc.onus[i].id) +
            " exceeds 2 * cell_radius (coverage hole)");
      }
    }
  }

  {
    Reader r(section("train"), "train", errors);
    if (auto v = r.get("start", len())) sc.train.start_mm = *v;
    if (auto v = r.get("speed", speed())) sc.train.speed_mm_s = *v;
    if (auto v = r.get("carrier", freq())) sc.carrier_hz = *v;
    if (auto m = r.get_string("mac")) {
      if (auto mac = parse_mac(*m)) sc.train.mac = *mac;
      else errors.push_back("train.mac: cannot parse '" + *m + "'");
    } else {
      sc.train.mac = 0x020000000001ull;
    }
    r.reject_unknown();
    if (sc.train.speed_mm_s < 0)
      errors.push_back("train.speed: must be >= 0");
  }

  {
    Reader r(section("policies"), "policies", errors);
    if (auto m = r.get_string("mode")) {
      if (*m == "window3") sc.mode = WhitelistMode::window3;
      else if (*m == "strict_antispoofing") sc.mode = WhitelistMode::strict_antispoofing;
      else errors.push_back("policies.mode: expected window3 or strict_antispoofing");
    }
    if (auto v = r.get("aging_time", dur())) sc.aging_time = *v;
    if (auto v = r.get("overlap", len())) sc.overlap_mm = *v;
    if (auto t = r.get_string("relearn_trigger")) {
      if (*t == "on_first_uplink_frame") {
        sc.relearn = RelearnTrigger::on_first_uplink_frame;
      } else if (t->rfind("fixed_delay(", 0) == 0 && t->back() == ')') {
        std::string inner = t->substr(12, t->size() - 13);
        std::string err;
        if (auto d = parse_duration_ns(inner, &err)) {
          sc.relearn = RelearnTrigger::fixed_delay;
          sc.relearn_delay = *d;
        } else {
          errors.push_back("policies.relearn_trigger: " + err);
        }
      } else {
        errors.push_back(
            "policies.relearn_trigger: expected on_first_uplink_frame or "
            "fixed_delay(<duration>)");
      }
    }
    r.reject_unknown();
    if (sc.aging_time <= 0) errors.push_back("policies.aging_time: must be positive");
    if (sc.overlap_mm < 0) errors.push_back("policies.overlap: must be >= 0");
    if (sc.relearn_delay < 0)
      errors.push_back("policies.relearn_trigger: delay must be >= 0");
  }

  for (const auto& [id, kv] : raw.tconts) {
    Reader r(kv, "tcont " + std::to_string(id), errors);
    TContProfile p;
    p.id = id;
    p.label = std::to_string(id);
    if (auto v = r.get("type", integer())) {
      if (*v >= 1 && *v <= 4) p.type = static_cast<TContType>(*v);
      else errors.push_back("tcont " + std::to_string(id) + ": type must be 1..4");
    }
    if (auto v = r.get("owner", integer())) p.owner_onu = static_cast<int>(*v);
    if (auto v = r.get("fixed", rate())) p.fixed_bps = *v;
    if (auto v = r.get("assured", rate())) p.assured_bps = *v;
    if (auto v = r.get("max", rate())) p.max_bps = *v;
    if (p.type == TContType::type1 && p.assured_bps == 0 && p.max_bps == 0) {
      // Type 1 is fixed-only; spare the author the redundant lines.
      p.assured_bps = p.max_bps = p.fixed_bps;
    }
    if (auto v = r.get_string("label")) p.label = *v;
    if (auto v = r.get_string("queue_cap")) {
      if (*v == "unbounded") {
        p.queue_cap_packets = 0;
      } else {
        std::string err;
        auto d = units::parse_decimal(*v);
        if (d && d->frac_digits == 0 && d->mantissa > 0) {
          p.queue_cap_packets = d->mantissa;
        } else {
          errors.push_back("tcont " + std::to_string(id) +
                           ".queue_cap: expected a packet count or 'unbounded'");
        }
      }
    }
    r.reject_unknown();
    for (auto& e : validate_profile(p)) errors.push_back(e);
    bool owner_ok = false;
    for (const auto& o : sc.onus) owner_ok |= o.id == p.owner_onu;
    if (!owner_ok)
      errors.push_back("tcont " + std::to_string(id) + ": owner onu " +
                       std::to_string(p.owner_onu) + " does not exist");
    sc.tconts.push_back(p);
  }
  // Per-ONU labels must be unambiguous.
  {
    std::set<std::pair<int, std::string>> seen;
    for (const auto& p : sc.tconts) {
      if (!seen.emplace(p.owner_onu, p.label).second)
        errors.push_back("tcont " + std::to_string(p.id) + ": duplicate label '" +
                         p.label + "' on onu " + std::to_string(p.owner_onu));
    }
  }
  for (auto& e : validate_fixed_capacity(sc.tconts, sc.olt, sc.frame_period))
    errors.push_back(e);

  for (const auto& [id, kv] : raw.flows) {
    Reader r(kv, "flow " + std::to_string(id), errors);
    FlowSpec f;
    f.id = id;
    if (auto d = r.get_string("direction")) {
      if (*d == "downstream") f.direction = Direction::downstream;
      else if (*d == "upstream") f.direction = Direction::upstream;
      else errors.push_back("flow " + std::to_string(id) +
                            ".direction: expected downstream or upstream");
    } else {
      errors.push_back("flow " + std::to_string(id) + ": direction is required");
    }
    if (auto v = r.get("packet_size", bytes())) f.packet_bytes = *v;
    if (auto v = r.get("rate", rate())) f.rate_bps = *v;
    if (auto v = r.get("jitter", plain())) f.jitter = *v;
    if (auto v = r.get("start", dur())) f.start = *v;
    if (auto v = r.get_string("tcont")) f.tcont_label = *v;
    r.reject_unknown();
    for (auto& e : validate_flow(f)) errors.push_back(e);
    if (f.direction == Direction::upstream && !f.tcont_label.empty()) {
      // The flow roams with the train: every ONU needs a tcont instance
      // carrying this label.
      for (const auto& o : sc.onus) {
        bool found = false;
        for (const auto& p : sc.tconts)
          found |= p.owner_onu == o.id && p.label == f.tcont_label;
        if (!found)
          errors.push_back("flow " + std::to_string(id) + ": onu " +
                           std::to_string(o.id) + " has no tcont labelled '" +
                           f.tcont_label + "'");
      }
    }
    sc.flows.push_back(f);
  }

  if (!errors.empty()) return std::nullopt;
  return sc;
}

struct ScenarioLoad {
  std::optional<Scenario> scenario;
  std::vector<std::string> errors;
};

inline ScenarioLoad load_scenario_text(const std::string& text,
                                       const std::string& name) {
  ScenarioLoad out;
  std::istringstream in(text);
  RawScenario raw;
  if (!parse_raw_scenario(in, raw, out.errors)) return out;
  out.scenario = materialize_scenario(raw, name, out.errors);
  return out;
}

inline ScenarioLoad load_scenario_file(
    const std::string& path,
    const std::vector<std::pair<std::string, std::string>>& overrides = {}) {
  ScenarioLoad out;
  std::ifstream in(path);
  if (!in) {
    out.errors.push_back("cannot open scenario file: " + path);
    return out;
  }
  RawScenario raw;
  if (!parse_raw_scenario(in, raw, out.errors)) return out;
  for (const auto& [path_key, value] : overrides) {
    std::string err;
    if (!apply_override(raw, path_key, value, err)) {
      out.errors.push_back(err);
      return out;
    }
  }
  std::string name = path;
  if (auto slash = name.find_last_of('/'); slash != std::string::npos)
    name = name.substr(slash + 1);
  if (auto dot = name.find_last_of('.'); dot != std::string::npos)
    name = name.substr(0, dot);
  out.scenario = materialize_scenario(raw, name, out.errors);
  return out;
}

}  // namespace railpon
