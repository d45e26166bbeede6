// Prints the three canned deployment rows straight from the planner API.
#include <cstdio>

#include "railpon/planner.hpp"

int main() {
  using namespace railpon::planner;
  std::printf("%-10s %10s %6s %10s %10s %8s %6s\n", "carrier", "radius_km",
              "#onus", "diff_km", "lmax_km", "budget", "T_min");
  for (const auto& in : table1_inputs()) {
    const DeploymentPlan p = plan(in);
    std::printf("%-10.3g %10.2f %6d %10.1f %10.1f %5.1f %2s %4lld\n",
                in.carrier_hz / 1e9, p.max_cell_radius_m / 1000.0,
                in.split_ratio,
                static_cast<double>(p.layout.diff_distance_mm) / 1e6,
                static_cast<double>(p.layout.l_max_mm) / 1e6,
                static_cast<double>(p.required_budget_mdb) / 1000.0,
                p.budget_class ? p.budget_class->name : "--",
                static_cast<long long>(p.t_minutes_floor));
  }
  return 0;
}
