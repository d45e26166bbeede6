#include <catch_amalgamated.hpp>

#include <fstream>
#include <sstream>
#include <string>

#include "railpon/engine.hpp"
#include "railpon/report_io.hpp"
#include "railpon/scenario.hpp"

using namespace railpon;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void check_golden(const std::string& scenario_name) {
  const std::string root = RAILPON_SOURCE_DIR;
  auto load = load_scenario_file(root + "/scenarios/" + scenario_name +
                                 ".scenario");
  CAPTURE(load.errors);
  REQUIRE(load.scenario);
  const std::string got = report_json_text(run_scenario(*load.scenario));
  const std::string want =
      slurp(root + "/tests/golden/" + scenario_name + ".report.json");
  // Byte-for-byte: the report schema is frozen; regenerate the golden
  // with `railpon run` only for a deliberate schema version bump.
  CHECK(got == want);
}

}  // namespace

TEST_CASE("golden report: paper_pdcp") { check_golden("paper_pdcp"); }

TEST_CASE("golden report: paper_gbe") { check_golden("paper_gbe"); }
