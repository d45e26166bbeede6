#include <catch_amalgamated.hpp>

#include <algorithm>
#include <string>

#include "railpon/planner.hpp"
#include "railpon/rng.hpp"

using namespace railpon;
using namespace railpon::planner;

TEST_CASE("Friis maximum radius at a 120 dB budget") {
  CHECK(friis_max_radius_m(700e6, 120'000) == Catch::Approx(34'081.0).margin(1.0));
  CHECK(friis_max_radius_m(3.5e9, 120'000) == Catch::Approx(6'816.2).margin(0.5));
  CHECK(friis_max_radius_m(25e9, 120'000) == Catch::Approx(954.27).margin(0.1));
  // +20 dB means exactly one decade of distance.
  CHECK(friis_max_radius_m(3.5e9, 140'000) ==
        Catch::Approx(10.0 * friis_max_radius_m(3.5e9, 120'000)));
}

TEST_CASE("Friis radius is monotone in carrier and budget") {
  DetRng rng(11);
  for (int i = 0; i < 200; ++i) {
    const double f = 1e8 + rng.next_unit() * 3e10;
    const MilliDb b = rng.next_in(60'000, 160'000);
    CHECK(friis_max_radius_m(f * 1.5, b) < friis_max_radius_m(f, b));
    CHECK(friis_max_radius_m(f, b + 1'000) > friis_max_radius_m(f, b));
  }
}

TEST_CASE("symmetric ONU layouts reproduce the three deployment rows") {
  auto r1 = onu_layout(4, 40'000'000);
  CHECK(r1.diff_distance_mm == 40'000'000);
  CHECK(r1.l_max_mm == 60'000'000);
  auto r2 = onu_layout(16, 5'000'000);
  CHECK(r2.diff_distance_mm == 35'000'000);
  CHECK(r2.l_max_mm == 37'500'000);
  auto r3 = onu_layout(64, 1'000'000);
  CHECK(r3.diff_distance_mm == 31'000'000);
  CHECK(r3.l_max_mm == 31'500'000);
}

TEST_CASE("odd ONU counts are rejected") {
  CHECK_THROWS_AS(onu_layout(5, 1'000'000), std::invalid_argument);
}

TEST_CASE("layout closed forms equal brute-force enumeration") {
  DetRng rng(23);
  for (int n = 2; n <= 128; n += 2) {
    for (int trial = 0; trial < 100; ++trial) {
      const std::int64_t spacing = rng.next_in(1, 100'000) * 10;  // mm
      auto lay = onu_layout(n, spacing);
      REQUIRE(static_cast<int>(lay.positions_m.size()) == n / 2);
      const double hi =
          *std::max_element(lay.positions_m.begin(), lay.positions_m.end());
      const double lo =
          *std::min_element(lay.positions_m.begin(), lay.positions_m.end());
      CHECK(static_cast<double>(lay.diff_distance_mm) / 1000.0 ==
            Catch::Approx(hi - lo).epsilon(1e-12));
      CHECK(static_cast<double>(lay.l_max_mm) / 1000.0 ==
            Catch::Approx(hi).epsilon(1e-12));
    }
  }
}

TEST_CASE("budget classes for the three rows") {
  auto r1 = budget_class(4, 60'000'000, 400, 3'500);
  CHECK(r1.required_mdb == 31'000);
  REQUIRE(r1.chosen);
  CHECK(std::string(r1.chosen->name) == "N2");

  auto r2 = budget_class(16, 37'500'000, 400, 3'500);
  CHECK(r2.required_mdb == 29'000);
  REQUIRE(r2.chosen);
  CHECK(std::string(r2.chosen->name) == "N1");

  // 21 + 12.6 = 33.6 dB: the smallest covering ITU class is E2 (35 dB).
  auto r3 = budget_class(64, 31'500'000, 400, 3'500);
  CHECK(r3.required_mdb == 33'600);
  REQUIRE(r3.chosen);
  CHECK(std::string(r3.chosen->name) == "E2");

  auto none = budget_class(128, 60'000'000, 400, 3'500);
  CHECK(none.chosen == nullptr);
}

TEST_CASE("uninterrupted time per PON tree") {
  CHECK(uninterrupted_time_s(4, 40'000'000, 100'000) == Catch::Approx(1600.0));
  CHECK(uninterrupted_time_s(64, 1'000'000, 100'000) == Catch::Approx(640.0));
  // speed doubled, time halved
  CHECK(uninterrupted_time_s(4, 40'000'000, 200'000) == Catch::Approx(800.0));
}

TEST_CASE("full plan for row 2 is feasible and matches the table") {
  PlannerInput in;  // defaults are the row-2 numbers
  auto p = plan(in);
  CHECK(p.feasible);
  CHECK(p.cell_radius_m == Catch::Approx(2'500.0));
  CHECK(p.layout.diff_distance_mm == 35'000'000);
  CHECK(p.layout.l_max_mm == 37'500'000);
  CHECK(p.required_budget_mdb == 29'000);
  CHECK(p.t_minutes_floor == 13);
}

TEST_CASE("infeasible spacings carry the failing predicate") {
  PlannerInput wide;
  wide.carrier_hz = 3.5e9;
  wide.split_ratio = 4;
  wide.onu_spacing_mm = 80'000'000;  // 40 km radius vs ~6.8 km Friis bound
  auto p = plan(wide);
  CHECK_FALSE(p.feasible);
  REQUIRE_FALSE(p.reasons.empty());
  CHECK(p.reasons[0].find("cell_radius") != std::string::npos);

  PlannerInput far;
  far.carrier_hz = 700e6;
  far.split_ratio = 8;
  far.onu_spacing_mm = 15'000'000;  // diff = 3 * 15 km = 45 km > 40 km
  auto q = plan(far);
  CHECK_FALSE(q.feasible);
  bool has_diff = false;
  for (const auto& r : q.reasons)
    has_diff |= r.find("differential") != std::string::npos;
  CHECK(has_diff);
}

TEST_CASE("plan feasibility is monotone in spacing on the radius predicate") {
  DetRng rng(31);
  for (int i = 0; i < 100; ++i) {
    PlannerInput in;
    in.carrier_hz = 5e8 + rng.next_unit() * 1e10;
    in.split_ratio = 1 << rng.next_in(1, 5);
    in.onu_spacing_mm = rng.next_in(1, 40'000) * 1'000;
    auto a = plan(in);
    PlannerInput closer = in;
    closer.onu_spacing_mm = in.onu_spacing_mm / 2 + 1;
    auto b = plan(closer);
    const bool a_radius_ok = a.cell_radius_m <= a.max_cell_radius_m;
    const bool b_radius_ok = b.cell_radius_m <= b.max_cell_radius_m;
    if (a_radius_ok) CHECK(b_radius_ok);
    // Coverage relation: feasible implies the cells reach the midpoint.
    if (a.feasible) CHECK(a.cell_radius_m <= a.max_cell_radius_m);
  }
}

TEST_CASE("non-power-of-two split ratios are rejected") {
  PlannerInput in;
  in.split_ratio = 6;
  CHECK_THROWS_AS(plan(in), std::invalid_argument);
}
