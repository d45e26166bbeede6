// railpon: scenario runner and deployment planner for a cell-less
// XGS-PON rail network.
//
//   railpon run <scenario> [-o DIR] [--override key=value]...
//   railpon validate <scenario>
//   railpon plan [--table1 | --carrier .. --split .. --spacing ..]
//                [--sweep --carriers .. --splits .. --spacings ..]
//                [--format text|csv|json]
//
// Exit codes: 0 success, 2 validation failure, 1 runtime error.

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "railpon/engine.hpp"
#include "railpon/planner.hpp"
#include "railpon/report_io.hpp"
#include "railpon/scenario.hpp"

namespace {

using namespace railpon;

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitValidation = 2;

std::vector<std::pair<std::string, std::string>> parse_overrides(
    const std::vector<std::string>& raw, std::vector<std::string>& errors) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& item : raw) {
    auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == item.size()) {
      errors.push_back("override '" + item + "': expected key=value");
      continue;
    }
    out.emplace_back(item.substr(0, eq), item.substr(eq + 1));
  }
  return out;
}

int cmd_run(const std::string& path, const std::string& out_dir,
            const std::vector<std::string>& raw_overrides) {
  std::vector<std::string> override_errors;
  auto overrides = parse_overrides(raw_overrides, override_errors);
  if (!override_errors.empty()) {
    for (const auto& e : override_errors) std::cerr << "error: " << e << "\n";
    return kExitValidation;
  }
  auto load = load_scenario_file(path, overrides);
  if (!load.scenario) {
    for (const auto& e : load.errors) std::cerr << "error: " << e << "\n";
    return kExitValidation;
  }

  RunReport report;
  try {
    report = run_scenario(*load.scenario);
  } catch (const std::exception& ex) {
    std::cerr << "runtime error: " << ex.what() << "\n";
    return kExitRuntime;
  }

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  std::string err;
  if (!write_file(out_dir + "/report.json", report_json_text(report), &err) ||
      !write_file(out_dir + "/throughput.csv", throughput_csv(report), &err) ||
      !write_file(out_dir + "/bursts.csv", bursts_csv(report), &err)) {
    std::cerr << "runtime error: " << err << "\n";
    return kExitRuntime;
  }

  std::int64_t dropped = 0, delivered = 0;
  for (const auto& f : report.flows) {
    dropped += f.dropped;
    delivered += f.delivered;
  }
  std::printf("%s: %" PRIu64 " frames, %lld delivered, %lld dropped, "
              "%lld violations -> %s/report.json\n",
              report.scenario_name.c_str(), report.frames,
              static_cast<long long>(delivered), static_cast<long long>(dropped),
              static_cast<long long>(report.violations), out_dir.c_str());
  return kExitOk;
}

int cmd_validate(const std::string& path) {
  auto load = load_scenario_file(path);
  if (!load.scenario) {
    for (const auto& e : load.errors) std::cerr << "error: " << e << "\n";
    return kExitValidation;
  }
  std::printf("%s: valid (%zu onus, %zu tconts, %zu flows)\n",
              load.scenario->name.c_str(), load.scenario->onus.size(),
              load.scenario->tconts.size(), load.scenario->flows.size());
  return kExitOk;
}

// --- plan output -----------------------------------------------------------

std::string fmt_km(double meters) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", meters / 1000.0);
  return buf;
}

std::string fmt_db(planner::MilliDb mdb) {
  char buf[32];
  if (mdb % 1000 == 0)
    std::snprintf(buf, sizeof buf, "%lld", static_cast<long long>(mdb / 1000));
  else
    std::snprintf(buf, sizeof buf, "%.3f", static_cast<double>(mdb) / 1000.0);
  return buf;
}

std::string fmt_carrier(double hz) {
  char buf[32];
  if (hz >= 1e9)
    std::snprintf(buf, sizeof buf, "%.6g GHz", hz / 1e9);
  else
    std::snprintf(buf, sizeof buf, "%.6g MHz", hz / 1e6);
  return buf;
}

std::string join(const std::vector<std::string>& v, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += sep;
    out += v[i];
  }
  return out;
}

void print_text(const std::vector<planner::DeploymentPlan>& plans) {
  std::printf("%-12s %-12s %6s %-10s %-12s %-10s %-9s %-14s %-8s %s\n",
              "carrier", "max radius", "#onus", "spacing", "cell radius",
              "diff max", "l_max", "budget", "T", "feasible");
  for (const auto& p : plans) {
    std::string budget = fmt_db(p.required_budget_mdb) + " dB";
    budget += p.budget_class ? std::string(" (") + p.budget_class->name + ")"
                             : std::string(" (none)");
    char tmin[32];
    std::snprintf(tmin, sizeof tmin, "%lld min",
                  static_cast<long long>(p.t_minutes_floor));
    std::string tail = p.feasible ? "yes" : "no: " + join(p.reasons, "; ");
    std::printf("%-12s %-12s %6d %-10s %-12s %-10s %-9s %-14s %-8s %s\n",
                fmt_carrier(p.input.carrier_hz).c_str(),
                (fmt_km(p.max_cell_radius_m) + " km").c_str(),
                p.input.split_ratio,
                (fmt_km(static_cast<double>(p.input.onu_spacing_mm) / 1000.0) + " km").c_str(),
                (fmt_km(p.cell_radius_m) + " km").c_str(),
                (fmt_km(static_cast<double>(p.layout.diff_distance_mm) / 1000.0) + " km").c_str(),
                (fmt_km(static_cast<double>(p.layout.l_max_mm) / 1000.0) + " km").c_str(),
                budget.c_str(), tmin, tail.c_str());
  }
}

void print_csv(const std::vector<planner::DeploymentPlan>& plans) {
  std::printf(
      "carrier_hz,max_cell_radius_m,n_onus,onu_spacing_m,cell_radius_m,"
      "diff_distance_max_m,l_max_m,required_budget_mdb,budget_class,"
      "t_uninterrupted_s,t_minutes,feasible,reasons\n");
  for (const auto& p : plans) {
    std::printf("%.0f,%.3f,%d,%.3f,%.3f,%.3f,%.3f,%lld,%s,%.3f,%lld,%d,\"%s\"\n",
                p.input.carrier_hz, p.max_cell_radius_m, p.input.split_ratio,
                static_cast<double>(p.input.onu_spacing_mm) / 1000.0,
                p.cell_radius_m,
                static_cast<double>(p.layout.diff_distance_mm) / 1000.0,
                static_cast<double>(p.layout.l_max_mm) / 1000.0,
                static_cast<long long>(p.required_budget_mdb),
                p.budget_class ? p.budget_class->name : "none",
                p.t_uninterrupted_s,
                static_cast<long long>(p.t_minutes_floor), p.feasible ? 1 : 0,
                join(p.reasons, "; ").c_str());
  }
}

void print_json(const std::vector<planner::DeploymentPlan>& plans) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& p : plans) {
    nlohmann::ordered_json row;
    row["carrier_hz"] = static_cast<std::int64_t>(p.input.carrier_hz);
    row["max_cell_radius_m"] = p.max_cell_radius_m;
    row["n_onus"] = p.input.split_ratio;
    row["onu_spacing_m"] = static_cast<double>(p.input.onu_spacing_mm) / 1000.0;
    row["cell_radius_m"] = p.cell_radius_m;
    row["diff_distance_max_m"] =
        static_cast<double>(p.layout.diff_distance_mm) / 1000.0;
    row["l_max_m"] = static_cast<double>(p.layout.l_max_mm) / 1000.0;
    row["required_budget_mdb"] = p.required_budget_mdb;
    row["budget_class"] = p.budget_class ? p.budget_class->name : "none";
    row["t_uninterrupted_s"] = p.t_uninterrupted_s;
    row["t_minutes"] = p.t_minutes_floor;
    row["feasible"] = p.feasible;
    row["reasons"] = p.reasons;
    rows.push_back(row);
  }
  std::printf("%s\n", rows.dump(2).c_str());
}

struct PlanArgs {
  bool table1 = false;
  bool sweep = false;
  std::string carrier, spacing, budget = "120dB", speed = "360km/h";
  std::string max_diff = "40km", atten = "0.4dB", splitter = "3.5dB";
  int split = 0;
  std::string carriers, splits, spacings;
  std::string format = "text";
};

int cmd_plan(const PlanArgs& args) {
  using namespace railpon::planner;
  std::vector<std::string> errors;
  auto parse_or = [&](auto parser, const std::string& text, const char* what,
                      std::int64_t fallback) -> std::int64_t {
    if (text.empty()) return fallback;
    std::string err;
    if (auto v = parser(text, &err)) return *v;
    errors.push_back(std::string(what) + ": " + err);
    return fallback;
  };

  PlannerInput base;
  base.rf_link_budget_mdb = parse_or(parse_mdb, args.budget, "--budget", 120'000);
  base.train_speed_mm_s = parse_or(parse_speed_mm_s, args.speed, "--speed", 100'000);
  base.max_diff_distance_mm =
      parse_or(parse_length_mm, args.max_diff, "--max-diff", 40'000'000);
  base.fiber_atten_mdb_per_km = parse_or(parse_mdb, args.atten, "--atten", 400);
  base.splitter_loss_mdb_per_stage =
      parse_or(parse_mdb, args.splitter, "--splitter-coef", 3'500);

  std::vector<PlannerInput> inputs;
  if (args.table1) {
    for (auto row : table1_inputs()) {
      row.rf_link_budget_mdb = base.rf_link_budget_mdb;
      row.train_speed_mm_s = base.train_speed_mm_s;
      row.max_diff_distance_mm = base.max_diff_distance_mm;
      row.fiber_atten_mdb_per_km = base.fiber_atten_mdb_per_km;
      row.splitter_loss_mdb_per_stage = base.splitter_loss_mdb_per_stage;
      inputs.push_back(row);
    }
  } else if (args.sweep) {
    std::vector<double> carriers;
    std::vector<int> splits;
    std::vector<std::int64_t> spacings;
    for (const auto& c : scenario_detail::split_list(args.carriers)) {
      std::string err;
      if (auto v = parse_frequency_hz(c, &err))
        carriers.push_back(static_cast<double>(*v));
      else errors.push_back("--carriers: " + err);
    }
    for (const auto& s : scenario_detail::split_list(args.splits)) {
      try {
        splits.push_back(std::stoi(s));
      } catch (...) {
        errors.push_back("--splits: bad integer '" + s + "'");
      }
    }
    for (const auto& s : scenario_detail::split_list(args.spacings)) {
      std::string err;
      if (auto v = parse_length_mm(s, &err)) spacings.push_back(*v);
      else errors.push_back("--spacings: " + err);
    }
    if (carriers.empty() || splits.empty() || spacings.empty())
      errors.push_back("--sweep needs --carriers, --splits and --spacings");
    for (double c : carriers)
      for (int n : splits)
        for (std::int64_t s : spacings) {
          PlannerInput in = base;
          in.carrier_hz = c;
          in.split_ratio = n;
          in.onu_spacing_mm = s;
          inputs.push_back(in);
        }
  } else {
    PlannerInput in = base;
    if (args.carrier.empty() || args.split == 0 || args.spacing.empty()) {
      errors.push_back("plan needs --table1, --sweep, or --carrier/--split/--spacing");
    } else {
      std::string err;
      if (auto v = parse_frequency_hz(args.carrier, &err))
        in.carrier_hz = static_cast<double>(*v);
      else errors.push_back("--carrier: " + err);
      in.split_ratio = args.split;
      in.onu_spacing_mm = parse_or(parse_length_mm, args.spacing, "--spacing", 0);
    }
    inputs.push_back(in);
  }

  for (const auto& in : inputs) {
    if (!is_power_of_two(in.split_ratio))
      errors.push_back("split ratio " + std::to_string(in.split_ratio) +
                       " is not a power of two");
    if (in.onu_spacing_mm <= 0) errors.push_back("spacing must be positive");
  }
  if (!errors.empty()) {
    for (const auto& e : errors) std::cerr << "error: " << e << "\n";
    return kExitValidation;
  }

  std::vector<DeploymentPlan> plans;
  plans.reserve(inputs.size());
  for (const auto& in : inputs) plans.push_back(plan(in));

  if (args.format == "text") print_text(plans);
  else if (args.format == "csv") print_csv(plans);
  else if (args.format == "json") print_json(plans);
  else {
    std::cerr << "error: --format must be text, csv or json\n";
    return kExitValidation;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cell-less XGS-PON rail network simulator and planner"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run a scenario and write reports");
  std::string run_path, out_dir = ".";
  std::vector<std::string> overrides;
  run->add_option("scenario", run_path, "scenario file")->required();
  run->add_option("-o,--output", out_dir, "output directory");
  run->add_option("--override", overrides,
                  "dotted-path override, e.g. policies.mode=strict_antispoofing");

  auto* validate = app.add_subcommand("validate", "check a scenario file");
  std::string val_path;
  validate->add_option("scenario", val_path, "scenario file")->required();

  auto* plan = app.add_subcommand("plan", "deployment feasibility table");
  PlanArgs pa;
  plan->add_flag("--table1", pa.table1, "the three canned deployment rows");
  plan->add_flag("--sweep", pa.sweep, "sweep carriers x splits x spacings");
  plan->add_option("--carrier", pa.carrier, "RF carrier, e.g. 3.5GHz");
  plan->add_option("--split", pa.split, "PON split ratio N (power of two)");
  plan->add_option("--spacing", pa.spacing, "distance between ONUs, e.g. 5km");
  plan->add_option("--budget", pa.budget, "RF link budget (default 120dB)");
  plan->add_option("--speed", pa.speed, "train speed (default 360km/h)");
  plan->add_option("--max-diff", pa.max_diff,
                   "max differential fiber distance (default 40km)");
  plan->add_option("--atten", pa.atten, "fiber attenuation per km (default 0.4dB)");
  plan->add_option("--splitter-coef", pa.splitter,
                   "splitter loss per split stage (default 3.5dB)");
  plan->add_option("--carriers", pa.carriers, "sweep: comma-separated carriers");
  plan->add_option("--splits", pa.splits, "sweep: comma-separated split ratios");
  plan->add_option("--spacings", pa.spacings, "sweep: comma-separated spacings");
  plan->add_option("--format", pa.format, "text, csv or json");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(run_path, out_dir, overrides);
    if (*validate) return cmd_validate(val_path);
    if (*plan) return cmd_plan(pa);
  } catch (const std::exception& ex) {
    std::cerr << "runtime error: " << ex.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}
