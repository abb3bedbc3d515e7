#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

namespace turnsim {

enum class ActivityKind {
  Positioning,  // ground vehicle moves: position, remove, drive between doors
  Service,
  Removal,      // release of the passenger equipment, which ends the turnaround
  Elastic,      // takes all available time (cleaning)
};

std::string_view kind_name(ActivityKind kind);

struct Predecessor {
  std::string id;
  double lag = 0.0;  // minutes
};

struct Activity {
  std::string id;
  double duration = 0.0;  // minutes; the minimum for Elastic activities
  ActivityKind kind = ActivityKind::Service;
  std::vector<Predecessor> predecessors;
  /// Drawn as late as its successors allow (vehicles arrive just in time).
  bool just_in_time = false;
};

struct ActivityGraph {
  std::vector<Activity> activities;

  Activity& add(std::string id, double duration, ActivityKind kind, std::vector<Predecessor> predecessors = {});
  const Activity* find(std::string_view id) const;
};

struct CateringDoor {
  std::string door;  // e.g. "1R"
  double fste = 0.0;
};

/// Turnaround reference conditions. Times in minutes, rates as named.
struct Scenario {
  std::string name;
  int passengers = 0;
  double load_factor = 1.0;
  std::vector<std::string> doors;    // passenger doors, e.g. "1L", "3L"
  std::vector<double> door_shares;   // fraction of passengers per door
  double pax_equipment_positioning = 2.0;
  double pax_equipment_removal = 2.0;
  double boarding_rate = 0.0;   // pax/min/door
  double deplaning_rate = 0.0;  // pax/min/door
  double lsr_headcounting = 2.0;

  double cargo_positioning = 2.0;
  double cargo_removal = 1.5;
  int containers_fwd = 0;
  int containers_aft = 0;
  double container_unloading = 1.5;  // min/container
  double container_loading = 1.5;    // min/container

  double fuel_quantity = 0.0;  // m^3; 0 means no refuelling
  double fuel_flow = 1.25;     // m^3/min
  double fuel_truck_positioning = 2.5;
  double fuel_truck_connection = 2.5;
  bool passengers_during_refuelling = false;

  int catering_trucks = 1;
  double catering_positioning = 2.0;
  double catering_removal = 1.5;
  double catering_drive = 2.0;
  double catering_repositioning = 1.5;  // at every door after the first
  std::vector<CateringDoor> catering_doors;
  double trolley_exchange = 1.2;  // min/FSTE
  std::optional<double> catering_minimum;

  double cleaning_minimum = 3.5;

  /// Throws ValidationError on non-positive rates, bad shares, etc.
  void validate() const;
};

Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::string& path);

/// Durations in minutes keyed by activity id, in network order.
std::vector<std::pair<std::string, double>> activity_durations(const Scenario& scenario);

ActivityGraph build_network(const Scenario& scenario);

struct ScheduledActivity {
  std::string id;
  ActivityKind kind = ActivityKind::Service;
  double start = 0.0;
  double end = 0.0;
  double earliest_start = 0.0;
  double slack = 0.0;  // total float of the minimum duration
  bool critical = false;
};

struct Schedule {
  std::vector<ScheduledActivity> activities;  // graph order
  double tat = 0.0;
  std::vector<std::string> critical_path;  // by start time

  const ScheduledActivity& at(std::string_view id) const;
};

/// Slack below this counts as zero.
inline constexpr double kSlackEpsilon = 1e-9;

/// Forward/backward pass. Critical activities have zero slack and are not
/// vehicle moves or elastic fillers. Throws CycleError or ValidationError.
Schedule cpm_schedule(const ActivityGraph& graph);

std::string gantt_csv(const Schedule& schedule);
nlohmann::json gantt_json(const Schedule& schedule);

}  // namespace turnsim
