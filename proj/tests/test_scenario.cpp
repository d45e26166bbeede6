#include <catch_amalgamated.hpp>

#include <string>

#include "railpon/scenario.hpp"

using namespace railpon;

namespace {
const std::string kScenarioDir = std::string(RAILPON_SOURCE_DIR) + "/scenarios/";
}

TEST_CASE("bundled paper_pdcp scenario parses and validates") {
  auto load = load_scenario_file(kScenarioDir + "paper_pdcp.scenario");
  CAPTURE(load.errors);
  REQUIRE(load.scenario);
  const Scenario& sc = *load.scenario;
  CHECK(sc.onus.size() == 2);
  CHECK(sc.aging_time == 20 * kNanosPerSec);
  CHECK(sc.relearn == RelearnTrigger::fixed_delay);
  CHECK(sc.relearn_delay == 3 * kNanosPerSec);
  CHECK(sc.train.speed_mm_s == 100'000);  // 360 km/h
  REQUIRE(sc.tconts.size() == 2);
  CHECK(sc.tconts[0].type == TContType::type2);
  CHECK(sc.tconts[0].fixed_bps == 150'000'000);
  REQUIRE(sc.flows.size() == 2);
  CHECK(sc.flows[0].packet_bytes == 1200);
  CHECK(sc.flows[0].rate_bps == 100'000'000);
}

TEST_CASE("bundled paper_gbe and floor_125us scenarios validate") {
  for (const char* name : {"paper_gbe.scenario", "floor_125us.scenario"}) {
    auto load = load_scenario_file(kScenarioDir + name);
    CAPTURE(name, load.errors);
    CHECK(load.scenario);
  }
}

TEST_CASE("an over-committed fixed profile names the dba constraint") {
  auto load = load_scenario_file(kScenarioDir + "paper_pdcp.scenario",
                                 {{"tcont.1.fixed", "11Gb/s"},
                                  {"tcont.1.assured", "11Gb/s"},
                                  {"tcont.1.max", "11Gb/s"}});
  REQUIRE_FALSE(load.scenario);
  bool named = false;
  for (const auto& e : load.errors) named |= e.find("dba:") != std::string::npos;
  CHECK(named);
}

TEST_CASE("empty input is a syntax error") {
  auto load = load_scenario_text("", "empty");
  REQUIRE_FALSE(load.scenario);
  REQUIRE_FALSE(load.errors.empty());
  CHECK(load.errors[0].find("empty") != std::string::npos);
}

TEST_CASE("missing file reports a clean error") {
  auto load = load_scenario_file("/nonexistent/nowhere.scenario");
  REQUIRE_FALSE(load.scenario);
  CHECK(load.errors[0].find("cannot open") != std::string::npos);
}

TEST_CASE("all validation errors are reported at once") {
  const std::string text = R"(
[run]
seed = 1
end_time = 0s

[topology]
onus = 2
onu_positions = 1km, 4km
onu_fibers = 1.5km, 1.5km
max_fiber = 1.5km
cell_radius = 0m

[train]
speed = 100m/s

[flow 1]
direction = sideways
packet_size = 12B
rate = 1Mb/s
)";
  auto load = load_scenario_text(text, "broken");
  REQUIRE_FALSE(load.scenario);
  CHECK(load.errors.size() >= 4);  // end_time, radius, direction, packet size
}

TEST_CASE("unknown keys and sections are rejected") {
  const std::string text = R"(
[run]
seed = 1
end_time = 1s
typo_key = 5

[mystery]
a = 1

[topology]
onus = 1
onu_positions = 0m
onu_fibers = 1km
max_fiber = 1km
cell_radius = 1km

[train]
speed = 0m/s
)";
  auto load = load_scenario_text(text, "odd");
  REQUIRE_FALSE(load.scenario);
  bool unknown_key = false, unknown_section = false;
  for (const auto& e : load.errors) {
    unknown_key |= e.find("typo_key") != std::string::npos;
    unknown_section |= e.find("mystery") != std::string::npos;
  }
  CHECK(unknown_key);
  CHECK(unknown_section);
}

TEST_CASE("overrides reach nested instances and bad paths are named") {
  auto load = load_scenario_file(kScenarioDir + "paper_pdcp.scenario",
                                 {{"policies.mode", "strict_antispoofing"},
                                  {"flow.2.rate", "20Mb/s"}});
  REQUIRE(load.scenario);
  CHECK(load.scenario->mode == WhitelistMode::strict_antispoofing);
  CHECK(load.scenario->flows[1].rate_bps == 20'000'000);

  auto bad = load_scenario_file(kScenarioDir + "paper_pdcp.scenario",
                                {{"tcont.9.fixed", "1Mb/s"}});
  REQUIRE_FALSE(bad.scenario);
  CHECK(bad.errors[0].find("tcont.9.fixed") != std::string::npos);

  auto malformed = load_scenario_file(kScenarioDir + "paper_pdcp.scenario",
                                      {{"nonsense", "1"}});
  REQUIRE_FALSE(malformed.scenario);
  CHECK(malformed.errors[0].find("nonsense") != std::string::npos);
}

TEST_CASE("coverage holes between adjacent ONUs are rejected") {
  const std::string text = R"(
[run]
seed = 1
end_time = 1s

[topology]
onus = 2
onu_positions = 0m, 10km
onu_fibers = 1km, 1km
max_fiber = 1km
cell_radius = 2km

[train]
speed = 100m/s
)";
  auto load = load_scenario_text(text, "hole");
  REQUIRE_FALSE(load.scenario);
  bool hole = false;
  for (const auto& e : load.errors)
    hole |= e.find("coverage hole") != std::string::npos;
  CHECK(hole);
}

TEST_CASE("quantity parsing is exact at unit resolution") {
  CHECK(*parse_rate_bps("9.95328Gb/s") == 9'953'280'000);
  CHECK(*parse_duration_ns("125us") == 125'000);
  CHECK(*parse_duration_ns("1min") == 60 * kNanosPerSec);
  CHECK(*parse_length_mm("37.5km") == 37'500'000);
  CHECK(*parse_speed_mm_s("360km/h") == 100'000);
  CHECK(*parse_bytes("1200B") == 1200);
  CHECK(*parse_mdb("0.4dB") == 400);
  CHECK_FALSE(parse_rate_bps("1.0000000001Gb/s"));  // finer than 1 b/s
  CHECK_FALSE(parse_duration_ns("12 parsecs"));
}
