#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "railpon/pon.hpp"
#include "railpon/time.hpp"

namespace railpon::planner {

// Optical loss accounting is done in integer milli-dB so the budget-class
// decision is exact; only the Friis radius and the uninterrupted time are
// real-valued.
using MilliDb = std::int64_t;

struct BudgetClass {
  const char* name;
  MilliDb loss_mdb;
};

// ITU-T G.9807.1 nominal/extended optical budget classes.
inline constexpr BudgetClass kBudgetClasses[] = {
    {"N1", 29'000}, {"N2", 31'000}, {"E1", 33'000}, {"E2", 35'000}};

struct PlannerInput {
  double carrier_hz = 3.5e9;
  MilliDb rf_link_budget_mdb = 120'000;
  int split_ratio = 16;                    // N, a power of two
  std::int64_t onu_spacing_mm = 5'000'000;  // distance between adjacent ONUs
  std::int64_t train_speed_mm_s = 100'000;  // 360 km/h
  std::int64_t max_diff_distance_mm = 40'000'000;
  MilliDb fiber_atten_mdb_per_km = 400;
  MilliDb splitter_loss_mdb_per_stage = 3'500;  // per 1:2 split stage
};

struct Layout {
  std::int64_t diff_distance_mm = 0;  // max - min OLT->ONU fiber distance
  std::int64_t l_max_mm = 0;          // longest OLT->ONU fiber distance
  std::vector<double> positions_m;    // per-side fiber distances from the OLT
};

struct DeploymentPlan {
  PlannerInput input;
  double max_cell_radius_m = 0;  // Friis bound for the RF budget
  double cell_radius_m = 0;      // spacing / 2
  Layout layout;
  MilliDb required_budget_mdb = 0;
  const BudgetClass* budget_class = nullptr;  // null when nothing fits
  double t_uninterrupted_s = 0;
  std::int64_t t_minutes_floor = 0;
  bool feasible = false;
  std::vector<std::string> reasons;  // populated when infeasible
};

// Largest distance at which free-space path loss stays within the link
// budget: 20*log10(4*pi*d*f/c) <= B  =>  d = c/(4*pi*f) * 10^(B/20).
inline double friis_max_radius_m(double carrier_hz, MilliDb budget_mdb) {
  if (carrier_hz <= 0) throw std::invalid_argument("carrier must be positive");
  return kSpeedOfLight / (4.0 * std::numbers::pi * carrier_hz) *
         std::pow(10.0, static_cast<double>(budget_mdb) / 20'000.0);
}

// Symmetric layout: OLT at the track midpoint, n/2 ONUs per side at fiber
// distances (k - 1/2) * spacing, k = 1..n/2.
inline Layout onu_layout(int n, std::int64_t spacing_mm) {
  if (n <= 0 || n % 2 != 0)
    throw std::invalid_argument("layout requires an even ONU count");
  if (spacing_mm <= 0) throw std::invalid_argument("spacing must be positive");
  Layout out;
  const std::int64_t half = n / 2;
  out.diff_distance_mm = (half - 1) * spacing_mm;
  // (half - 1/2) * spacing, rounded half-up to the millimetre grid; exact
  // whenever the spacing is an even number of millimetres.
  out.l_max_mm = div_round_half_up((2 * half - 1) * spacing_mm, 2);
  out.positions_m.reserve(half);
  for (std::int64_t k = 1; k <= half; ++k) {
    out.positions_m.push_back(
        (static_cast<double>(k) - 0.5) * static_cast<double>(spacing_mm) / 1000.0);
  }
  return out;
}

inline bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

struct BudgetResult {
  MilliDb required_mdb = 0;
  const BudgetClass* chosen = nullptr;  // null = no class fits
};

// Splitter loss plus fiber attenuation over the longest branch, matched
// against the smallest class that covers it.
inline BudgetResult budget_class(int n, std::int64_t l_max_mm,
                                 MilliDb atten_mdb_per_km,
                                 MilliDb splitter_mdb_per_stage) {
  if (!is_power_of_two(n))
    throw std::invalid_argument("split ratio must be a power of two");
  int stages = 0;
  for (int v = n; v > 1; v >>= 1) ++stages;
  BudgetResult out;
  out.required_mdb = splitter_mdb_per_stage * stages +
                     atten_mdb_per_km * l_max_mm / 1'000'000;
  for (const auto& cls : kBudgetClasses) {
    if (cls.loss_mdb >= out.required_mdb) {
      out.chosen = &cls;
      break;
    }
  }
  return out;
}

// Full covered track length of one PON tree over the train speed.
inline double uninterrupted_time_s(int n, std::int64_t spacing_mm,
                                   std::int64_t speed_mm_s) {
  if (speed_mm_s <= 0) throw std::invalid_argument("speed must be positive");
  return static_cast<double>(n) * static_cast<double>(spacing_mm) /
         static_cast<double>(speed_mm_s);
}

namespace detail {
inline std::string fmt_km(double meters) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", meters / 1000.0);
  return buf;
}
}  // namespace detail

inline DeploymentPlan plan(const PlannerInput& in) {
  if (!is_power_of_two(in.split_ratio))
    throw std::invalid_argument("split ratio must be a power of two");
  DeploymentPlan out;
  out.input = in;
  out.max_cell_radius_m = friis_max_radius_m(in.carrier_hz, in.rf_link_budget_mdb);
  out.cell_radius_m = static_cast<double>(in.onu_spacing_mm) / 2000.0;
  out.layout = onu_layout(in.split_ratio, in.onu_spacing_mm);
  auto budget = budget_class(in.split_ratio, out.layout.l_max_mm,
                             in.fiber_atten_mdb_per_km,
                             in.splitter_loss_mdb_per_stage);
  out.required_budget_mdb = budget.required_mdb;
  out.budget_class = budget.chosen;
  out.t_uninterrupted_s =
      uninterrupted_time_s(in.split_ratio, in.onu_spacing_mm, in.train_speed_mm_s);
  out.t_minutes_floor = static_cast<std::int64_t>(out.t_uninterrupted_s / 60.0);

  if (out.cell_radius_m > out.max_cell_radius_m) {
    out.reasons.push_back("cell_radius " + detail::fmt_km(out.cell_radius_m) +
                          " km exceeds Friis bound " +
                          detail::fmt_km(out.max_cell_radius_m) + " km");
  }
  if (out.layout.diff_distance_mm > in.max_diff_distance_mm) {
    out.reasons.push_back(
        "differential distance " +
        detail::fmt_km(static_cast<double>(out.layout.diff_distance_mm) / 1000.0) +
        " km exceeds limit " +
        detail::fmt_km(static_cast<double>(in.max_diff_distance_mm) / 1000.0) +
        " km");
  }
  if (out.budget_class == nullptr) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g",
                  static_cast<double>(out.required_budget_mdb) / 1000.0);
    out.reasons.push_back("required optical budget " + std::string(buf) +
                          " dB exceeds every class (max E2 = 35 dB)");
  }
  out.feasible = out.reasons.empty();
  return out;
}

// The three deployment rows the tool prints with --table1.
inline std::vector<PlannerInput> table1_inputs() {
  std::vector<PlannerInput> rows(3);
  rows[0].carrier_hz = 700e6;
  rows[0].split_ratio = 4;
  rows[0].onu_spacing_mm = 40'000'000;
  rows[1].carrier_hz = 3.5e9;
  rows[1].split_ratio = 16;
  rows[1].onu_spacing_mm = 5'000'000;
  rows[2].carrier_hz = 25e9;
  rows[2].split_ratio = 64;
  rows[2].onu_spacing_mm = 1'000'000;
  return rows;
}

}  // namespace railpon::planner
