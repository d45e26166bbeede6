// Builds a two-ONU scenario in code, runs it, and prints the per-flow
// outcome. The same thing the CLI does, minus the file I/O.
#include <cstdio>

#include "railpon/engine.hpp"
#include "railpon/scenario.hpp"

int main() {
  const char* text = R"(
[run]
seed = 1
end_time = 10s

[topology]
onus = 2
onu_positions = 0m, 2km
onu_fibers = 500m, 500m
max_fiber = 500m
cell_radius = 1.5km

[train]
start = 0m
speed = 100m/s

[policies]
mode = window3
aging_time = 20s
relearn_trigger = on_first_uplink_frame
overlap = 200m

[tcont 1]
type = 2
owner = 1
label = mobile
fixed = 150Mb/s
assured = 150Mb/s
max = 150Mb/s

[tcont 2]
type = 2
owner = 2
label = mobile
fixed = 150Mb/s
assured = 150Mb/s
max = 150Mb/s

[flow 1]
direction = downstream
packet_size = 1200B
rate = 100Mb/s

[flow 2]
direction = upstream
packet_size = 1200B
rate = 50Mb/s
tcont = mobile
)";
  auto load = railpon::load_scenario_text(text, "inline");
  if (!load.scenario) {
    for (const auto& e : load.errors) std::fprintf(stderr, "error: %s\n", e.c_str());
    return 2;
  }
  auto report = railpon::run_scenario(*load.scenario);
  std::printf("frames: %llu\n", static_cast<unsigned long long>(report.frames));
  for (const auto& f : report.flows) {
    std::printf("flow %d: sent %lld, delivered %lld, dropped %lld, "
                "interruptions %zu\n",
                f.spec.id, static_cast<long long>(f.sent),
                static_cast<long long>(f.delivered),
                static_cast<long long>(f.dropped), f.interruptions.size());
  }
  return 0;
}
