#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "turnsim/engine.hpp"

namespace turnsim {

inline constexpr int kDefaultRuns = 200;

struct RunSummary {
  std::uint64_t seed = 0;
  double elapsed = 0.0;
  int passengers = 0;
  int maneuvers = 0;
  int virtual_maneuvers = 0;
  std::string error;  // empty on success
};

struct BatchStats {
  int n_runs = 0;    // successful runs
  int failures = 0;  // runs that threw; listed in per_run with `error` set
  int passengers = 0;
  int doors = 0;
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
  double std = 0.0;  // sample standard deviation, 0 for a single run
  std::vector<RunSummary> per_run;

  double rate() const;  // pax/min/door of the mean
};

/// Runs seeds base_seed .. base_seed + n_runs - 1. `threads` <= 0 picks the
/// hardware concurrency. Results do not depend on the thread count.
BatchStats run_batch(const SimConfig& config, int n_runs, std::uint64_t base_seed, int threads = 0);

/// pax / (elapsed / 60) / doors.
double compute_rate(double n_pax, int n_doors, double elapsed);

struct SweepSpec {
  std::vector<double> interference;                 // empty: keep base
  std::vector<double> load;                         // empty: keep base
  std::vector<double> luggage_constant;             // empty: keep base preset
  std::vector<std::vector<int>> door_sets;          // empty: keep base
  int n_runs = kDefaultRuns;
  std::uint64_t base_seed = 1;
  int threads = 0;
};

struct SweepRow {
  double interference = 0.0;
  double load = 0.0;
  std::string luggage;  // preset name or constant seconds
  std::vector<int> doors;
  BatchStats stats;
};

/// Cartesian product of the grids, one batch per point, IF varying slowest.
std::vector<SweepRow> sweep(const SimConfig& base, const SweepSpec& spec);

/// Number of doors a config opens (every layout door when the list is empty).
int active_door_count(const SimConfig& config);

std::string sweep_csv(const std::vector<SweepRow>& rows);
nlohmann::json sweep_json(const std::vector<SweepRow>& rows);
nlohmann::json batch_json(const BatchStats& stats);

}  // namespace turnsim
