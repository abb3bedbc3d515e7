// turnsim: boarding/deboarding simulation and turnaround scheduling.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "turnsim/config.hpp"
#include "turnsim/errors.hpp"
#include "turnsim/experiment.hpp"
#include "turnsim/turnaround.hpp"
#include "turnsim/validation.hpp"

namespace fs = std::filesystem;
using namespace turnsim;

namespace {

enum Exit { kOk = 0, kValidationFailed = 1, kConfigError = 2, kEngineError = 3 };

struct RunFlags {
  std::string config;
  std::string layout;
  double lf = 1.0;
  double interference = 0.0;
  std::string doors;
  std::string preset = "B";
  std::optional<double> tlug;
  std::string strategy = "random";
  int zones = 4;
  std::string order;
  std::uint64_t seed = 1;
  int runs = kDefaultRuns;
  int threads = 0;
  std::string out = ".";
  std::string direction = "board";
  std::string door_assignment = "balanced";
  std::string data_dir = TURNSIM_DATA_DIR;
};

void add_run_flags(CLI::App* cmd, RunFlags& f, bool batch) {
  cmd->add_option("--config", f.config, "Run config file (key = value); flags given too override it");
  cmd->add_option("--layout", f.layout, "Layout file, or the name of a shipped layout");
  cmd->add_option("--lf", f.lf, "Load factor in [0, 1]");
  cmd->add_option("--if", f.interference, "Interference factor in [0, 1]");
  cmd->add_option("--doors", f.doors, "Active doors, e.g. 1L,3L (default: all)");
  cmd->add_option("--preset", f.preset, "Luggage preset A or B");
  cmd->add_option("--tlug", f.tlug, "Constant luggage time in seconds (replaces the preset)");
  cmd->add_option("--strategy", f.strategy, "random, outside-in, back-to-front, rotating-zone or user");
  cmd->add_option("--zones", f.zones, "Zone count for zone strategies");
  cmd->add_option("--order", f.order, "Seat order file for the user strategy");
  cmd->add_option("--seed", f.seed, batch ? "Base seed" : "Seed");
  if (batch) {
    cmd->add_option("--runs", f.runs, "Runs per batch");
    cmd->add_option("--threads", f.threads, "Worker threads (0: all cores)");
  }
  cmd->add_option("--out", f.out, "Output directory");
  cmd->add_option("--direction", f.direction, "board or deboard");
  cmd->add_option("--door-assignment", f.door_assignment, "balanced or nearest");
  cmd->add_option("--data", f.data_dir, "Directory with layouts/ and scenarios/");
}

std::string find_layout(const std::string& name, const std::string& data_dir) {
  if (fs::exists(name)) return name;
  for (const auto& candidate : {data_dir + "/layouts/" + name, data_dir + "/layouts/" + name + ".cab"}) {
    if (fs::exists(candidate)) return candidate;
  }
  throw ValidationError("no layout file '" + name + "'");
}

SimConfig build_config(const CLI::App* cmd, RunFlags& f) {
  SimConfig c;
  const auto given = [&](const char* flag) {
    const auto* opt = cmd->get_option_no_throw(flag);
    return opt != nullptr && opt->count() > 0;
  };
  if (!f.config.empty()) {
    const auto rc = load_run_config(f.config);
    c = rc.sim;
    if (!given("--runs")) f.runs = rc.runs;
    if (!given("--seed")) f.seed = c.seed.value;
  } else if (f.layout.empty()) {
    throw ValidationError("give --layout or --config");
  }
  if (!f.layout.empty()) c.grid = std::make_shared<const CabinGrid>(load_layout(find_layout(f.layout, f.data_dir)));
  if (f.config.empty() || given("--lf")) c.load_factor = f.lf;
  if (f.config.empty() || given("--if")) c.interference_factor = f.interference;
  if (given("--doors")) c.active_doors = parse_door_list(f.doors);
  if (f.tlug) {
    c.luggage = LuggageTime::fixed(*f.tlug);
  } else if (f.config.empty() || given("--preset")) {
    c.luggage = LuggageTime::preset(f.preset);
  }
  if (f.config.empty() || given("--strategy")) {
    const auto kind = parse_strategy(f.strategy);
    if (!kind) throw ValidationError("unknown strategy '" + f.strategy + "'");
    c.strategy.kind = *kind;
  }
  if (given("--zones")) c.strategy.zone_count = f.zones;
  if (!f.order.empty()) c.strategy.order = load_user_order(f.order);
  if (f.config.empty() || given("--direction")) c.direction = parse_direction(f.direction);
  if (f.config.empty() || given("--door-assignment")) {
    if (f.door_assignment == "nearest") {
      c.door_assignment = DoorAssignment::Nearest;
    } else if (f.door_assignment == "balanced") {
      c.door_assignment = DoorAssignment::Balanced;
    } else {
      throw ValidationError("--door-assignment must be balanced or nearest");
    }
  }
  c.seed.value = f.seed;
  c.validate();
  return c;
}

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << content;
}

int cmd_simulate(const CLI::App* cmd, RunFlags& f) {
  auto c = build_config(cmd, f);
  c.record_events = true;
  const auto r = run(c);
  const auto& grid = *c.grid;

  nlohmann::json j{{"direction", c.direction == Direction::Boarding ? "board" : "deboard"},
                   {"seed", c.seed.value},
                   {"passengers", r.passengers},
                   {"elapsed_s", r.elapsed},
                   {"ticks", r.ticks},
                   {"maneuvers", r.maneuvers},
                   {"virtual_maneuvers", r.virtual_maneuvers}};
  if (c.direction == Direction::Deboarding) {
    j["first_exit_s"] = r.first_exit;
    j["last_exit_s"] = r.last_exit;
  }
  nlohmann::json pax = nlohmann::json::array();
  for (std::size_t i = 0; i < r.seat_of.size(); ++i) {
    pax.push_back({{"id", i}, {"seat", grid.seats()[static_cast<std::size_t>(r.seat_of[i])].id}, {"door", r.door_of[i]}});
  }
  j["passenger_list"] = std::move(pax);
  std::vector<std::string> occupancy;
  for (int y = 0; y < grid.n_v(); ++y) {
    std::string row;
    for (int x = 0; x < grid.n_h(); ++x) {
      const int who = r.final_occupancy[static_cast<std::size_t>(grid.index({x, y}))];
      row.push_back(who >= 0 ? 'P' : cell_char(grid.kind({x, y})));
    }
    occupancy.push_back(std::move(row));
  }
  j["final_occupancy"] = std::move(occupancy);

  std::string csv = "tick,passenger,state,x,y\n";
  for (const auto& e : r.events) {
    csv += std::to_string(e.tick) + ',' + std::to_string(e.passenger) + ',' + std::string(state_name(e.state)) + ',' +
           std::to_string(e.cell.x) + ',' + std::to_string(e.cell.y) + '\n';
  }
  write_file(fs::path(f.out) / "result.json", j.dump(2) + "\n");
  write_file(fs::path(f.out) / "events.csv", csv);

  const long s = std::lround(r.elapsed);
  std::printf("%s %d passengers: %.1f s (%ld:%02ld), %d maneuvers\n",
              c.direction == Direction::Boarding ? "BT" : "DT", r.passengers, r.elapsed, s / 60, s % 60, r.maneuvers);
  return kOk;
}

int cmd_batch(const CLI::App* cmd, RunFlags& f) {
  const auto c = build_config(cmd, f);
  const auto stats = run_batch(c, f.runs, f.seed, f.threads);
  SweepRow row{c.interference_factor, c.load_factor, c.luggage.label, c.active_doors, stats};
  write_file(fs::path(f.out) / "batch.csv", sweep_csv({row}));
  write_file(fs::path(f.out) / "batch.json", batch_json(stats).dump(2) + "\n");
  std::printf("%d runs (%d failed): mean %.1f s, min %.1f, max %.1f, std %.1f, rate %.2f pax/min/door\n",
              stats.n_runs, stats.failures, stats.mean, stats.min, stats.max, stats.std, stats.rate());
  return kOk;
}

std::vector<double> number_list(const std::string& text, const char* flag) {
  std::vector<double> out;
  if (text.empty()) return out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ValidationError(std::string(flag) + ": '" + item + "' is not a number");
    }
  }
  return out;
}

struct SweepFlags {
  std::string if_grid, lf_grid, tlug_grid, door_sets;
};

int cmd_sweep(const CLI::App* cmd, RunFlags& f, const SweepFlags& s) {
  const auto c = build_config(cmd, f);
  SweepSpec spec;
  spec.interference = number_list(s.if_grid, "--if-grid");
  spec.load = number_list(s.lf_grid, "--lf-grid");
  spec.luggage_constant = number_list(s.tlug_grid, "--tlug-grid");
  if (!s.door_sets.empty()) {
    std::stringstream in(s.door_sets);
    std::string set;
    while (std::getline(in, set, ';')) spec.door_sets.push_back(parse_door_list(set));
  }
  spec.n_runs = f.runs;
  spec.base_seed = f.seed;
  spec.threads = f.threads;
  const auto rows = sweep(c, spec);
  const auto csv = sweep_csv(rows);
  write_file(fs::path(f.out) / "sweep.csv", csv);
  write_file(fs::path(f.out) / "sweep.json", sweep_json(rows).dump(2) + "\n");
  std::fputs(csv.c_str(), stdout);
  return kOk;
}

int cmd_turnaround(const std::string& scenario, const std::string& out, const std::string& data_dir) {
  std::string path = scenario;
  if (!fs::exists(path)) path = data_dir + "/scenarios/" + scenario + ".scn";
  if (!fs::exists(path)) throw ValidationError("no scenario '" + scenario + "'");
  const auto schedule = cpm_schedule(build_network(load_scenario(path)));
  std::printf("TAT %.2f min\ncritical path:", schedule.tat);
  for (std::size_t i = 0; i < schedule.critical_path.size(); ++i) {
    std::printf("%s %s", i == 0 ? "" : " ->", schedule.critical_path[i].c_str());
  }
  std::printf("\n");
  if (!out.empty()) {
    write_file(fs::path(out) / "gantt.csv", gantt_csv(schedule));
    write_file(fs::path(out) / "gantt.json", gantt_json(schedule).dump(2) + "\n");
  }
  return kOk;
}

int cmd_layouts(const std::string& inspect, const std::string& data_dir) {
  const auto describe = [](const std::string& path) {
    const auto g = load_layout(path);
    std::string doors;
    for (const auto& d : g.doors()) doors += (doors.empty() ? "" : ",") + std::to_string(d.id);
    std::printf("%-28s %3dx%-3d seats %3zu  doors %-6s  L_H %.2f m  L_V %.2f m  gamma %.3f  %s aisles\n",
                fs::path(path).filename().string().c_str(), g.n_h(), g.n_v(), g.seats().size(), doors.c_str(),
                g.length_h(), g.length_v(), gamma(g), g.has_wide_aisle() ? "wide" : "narrow");
  };
  if (!inspect.empty()) {
    const auto path = find_layout(inspect, data_dir);
    describe(path);
    std::fputs(serialize_layout(load_layout(path)).c_str(), stdout);
    return kOk;
  }
  std::vector<std::string> files;
  for (const auto& e : fs::directory_iterator(data_dir + "/layouts")) {
    if (e.path().extension() == ".cab") files.push_back(e.path().string());
  }
  std::sort(files.begin(), files.end());
  for (const auto& p : files) describe(p);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Aircraft boarding/deboarding simulator and turnaround estimator"};
  app.require_subcommand(1);

  RunFlags sim_flags, batch_flags, sweep_flags;
  auto* simulate = app.add_subcommand("simulate", "One run; writes result.json and events.csv");
  add_run_flags(simulate, sim_flags, false);
  auto* batch = app.add_subcommand("batch", "Monte Carlo batch; writes batch.csv and batch.json");
  add_run_flags(batch, batch_flags, true);
  auto* sweep_cmd = app.add_subcommand("sweep", "Batches over a parameter grid; writes sweep.csv and sweep.json");
  add_run_flags(sweep_cmd, sweep_flags, true);
  SweepFlags grids;
  sweep_cmd->add_option("--if-grid", grids.if_grid, "Comma-separated IF values");
  sweep_cmd->add_option("--lf-grid", grids.lf_grid, "Comma-separated LF values");
  sweep_cmd->add_option("--tlug-grid", grids.tlug_grid, "Comma-separated constant luggage times [s]");
  sweep_cmd->add_option("--door-sets", grids.door_sets, "Door sets separated by ';', e.g. '1L;1L,3L'");

  std::string scenario, tat_out, data_dir = TURNSIM_DATA_DIR;
  auto* turnaround = app.add_subcommand("turnaround", "Critical-path schedule of a turnaround scenario");
  turnaround->add_option("--scenario", scenario, "Scenario file or preset name")->required();
  turnaround->add_option("--out", tat_out, "Directory for gantt.csv and gantt.json");
  turnaround->add_option("--data", data_dir, "Directory with layouts/ and scenarios/");

  std::string suite = "all";
  ValidationOptions vopts;
  vopts.data_dir = TURNSIM_DATA_DIR;
  auto* validate = app.add_subcommand("validate", "Compare against the reference tables");
  validate->add_option("suite", suite, "table3, table4, table6, table7, fig8, doors or all");
  validate->add_option("--runs", vopts.runs, "Runs per batch");
  validate->add_option("--seed", vopts.base_seed, "Base seed");
  validate->add_option("--threads", vopts.threads, "Worker threads (0: all cores)");
  validate->add_option("--data", vopts.data_dir, "Directory with layouts/ and scenarios/");

  std::string inspect;
  auto* layouts = app.add_subcommand("layouts", "List shipped layouts or inspect one");
  layouts->add_option("--inspect", inspect, "Layout file or shipped name");
  layouts->add_option("--data", data_dir, "Directory with layouts/ and scenarios/");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*simulate) return cmd_simulate(simulate, sim_flags);
    if (*batch) return cmd_batch(batch, batch_flags);
    if (*sweep_cmd) return cmd_sweep(sweep_cmd, sweep_flags, grids);
    if (*turnaround) return cmd_turnaround(scenario, tat_out, data_dir);
    if (*layouts) return cmd_layouts(inspect, data_dir);
    if (*validate) {
      if (vopts.runs < 1) throw ValidationError("--runs must be >= 1");
      const auto checks = validate_suite(suite, vopts);
      std::fputs(format_checks(checks).c_str(), stdout);
      const bool ok = std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
      return ok ? kOk : kValidationFailed;
    }
  } catch (const ParseError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const ConnectivityError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const ValidationError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const DeadlockError& e) {
    std::cerr << "engine error: " << e.what() << '\n' << e.snapshot();
    return kEngineError;
  } catch (const CycleError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "engine error: " << e.what() << '\n';
    return kEngineError;
  }
  return kOk;
}
