#pragma once

#include <string>
#include <vector>

#include "turnsim/experiment.hpp"
#include "turnsim/turnaround.hpp"

namespace turnsim {

/// One line of a validation table.
struct Check {
  std::string name;
  std::string measured;  // human-readable value(s)
  std::string expected;  // declared value and tolerance
  bool pass = false;
};

struct ValidationOptions {
  std::string data_dir;  // holds layouts/ and scenarios/
  int runs = kDefaultRuns;
  std::uint64_t base_seed = 1;
  int threads = 0;
};

/// Builds a run against one of the shipped layouts.
SimConfig shipped_config(const ValidationOptions& options, const std::string& layout, double load_factor,
                         std::vector<int> doors, const std::string& preset, Direction direction,
                         double interference = 0.0);

std::vector<Check> validate_boarding(const ValidationOptions& options);    // declared BTs
std::vector<Check> validate_deboarding(const ValidationOptions& options);  // declared DTs
std::vector<Check> validate_rates(const ValidationOptions& options);       // PrP pax/min/door
std::vector<Check> validate_turnaround(const ValidationOptions& options);  // TAT + critical sets
std::vector<Check> validate_luggage_sweep(const ValidationOptions& options);
std::vector<Check> validate_door_saturation(const ValidationOptions& options);

/// Suite by name: table3, table4, table6, table7, fig8, doors or all.
std::vector<Check> validate_suite(const std::string& suite, const ValidationOptions& options);

/// Aligned pass/fail table.
std::string format_checks(const std::vector<Check>& checks);

}  // namespace turnsim
