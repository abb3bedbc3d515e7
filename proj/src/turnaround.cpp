#include "turnsim/turnaround.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>
#include <fstream>
#include <sstream>

#include "turnsim/config.hpp"
#include "turnsim/errors.hpp"

namespace turnsim {

std::string_view kind_name(ActivityKind kind) {
  switch (kind) {
    case ActivityKind::Positioning: return "positioning";
    case ActivityKind::Service: return "service";
    case ActivityKind::Removal: return "removal";
    case ActivityKind::Elastic: return "elastic";
  }
  return "?";
}

Activity& ActivityGraph::add(std::string id, double duration, ActivityKind kind, std::vector<Predecessor> predecessors) {
  activities.push_back({std::move(id), duration, kind, std::move(predecessors), false});
  return activities.back();
}

const Activity* ActivityGraph::find(std::string_view id) const {
  for (const auto& a : activities) {
    if (a.id == id) return &a;
  }
  return nullptr;
}

void Scenario::validate() const {
  if (passengers < 0) throw ValidationError("passenger count must be >= 0");
  if (doors.empty()) throw ValidationError("scenario needs at least one passenger door");
  if (door_shares.size() != doors.size()) throw ValidationError("one passenger share per door is required");
  double total = 0.0;
  for (const double s : door_shares) {
    if (!(s >= 0.0)) throw ValidationError("door shares must be >= 0");
    total += s;
  }
  if (std::abs(total - 1.0) > 1e-9) throw ValidationError("door shares must sum to 1");
  if (!(boarding_rate > 0.0) || !(deplaning_rate > 0.0)) throw ValidationError("boarding and deplaning rates must be positive");
  if (containers_fwd < 0 || containers_aft < 0) throw ValidationError("container counts must be >= 0");
  if (fuel_quantity < 0.0) throw ValidationError("fuel quantity must be >= 0");
  if (fuel_quantity > 0.0 && !(fuel_flow > 0.0)) throw ValidationError("fuel flow must be positive");
  if (catering_trucks < 1 && !catering_doors.empty()) throw ValidationError("catering needs at least one truck");
  if (!(trolley_exchange > 0.0)) throw ValidationError("trolley exchange time must be positive");
  for (const auto& d : catering_doors) {
    if (d.fste < 0.0) throw ValidationError("FSTE counts must be >= 0");
  }
  const double times[] = {pax_equipment_positioning, pax_equipment_removal, lsr_headcounting, cargo_positioning,
                          cargo_removal, container_unloading, container_loading, fuel_truck_positioning,
                          fuel_truck_connection, catering_positioning, catering_removal, catering_drive,
                          catering_repositioning, cleaning_minimum};
  for (const double t : times) {
    if (!(t >= 0.0)) throw ValidationError("activity times must be >= 0");
  }
  if (catering_minimum && !(*catering_minimum >= 0.0)) throw ValidationError("minimum catering time must be >= 0");
}

namespace {

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos) throw ValidationError("empty item in list '" + text + "'");
    out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

std::string pax_door(std::string door) {
  if (!door.empty() && std::isdigit(static_cast<unsigned char>(door.back()))) door.push_back('L');
  return door;
}

}  // namespace

Scenario parse_scenario(std::string_view text) {
  const auto kv = KeyValues::parse(text);
  Scenario s;
  const auto req_number = [&](const char* key) {
    const auto v = kv.number(key);
    if (!v) throw ValidationError(std::string("scenario is missing '") + key + "'");
    return *v;
  };
  const auto opt = [&](const char* key, double& target) {
    if (auto v = kv.number(key)) target = *v;
  };

  s.name = kv.text("name").value_or("");
  s.passengers = static_cast<int>(kv.integer("passengers").value_or(0));
  opt("load_factor", s.load_factor);
  for (const auto& d : split_list(kv.text("doors").value_or("1L"))) s.doors.push_back(pax_door(d));
  if (auto shares = kv.numbers("passengers_per_door")) {
    s.door_shares = *shares;
  } else {
    s.door_shares.assign(s.doors.size(), 1.0 / static_cast<double>(s.doors.size()));
  }
  opt("pax_equipment_positioning_min", s.pax_equipment_positioning);
  opt("pax_equipment_removal_min", s.pax_equipment_removal);
  s.boarding_rate = req_number("boarding_rate");
  opt("lsr_headcounting_min", s.lsr_headcounting);
  s.deplaning_rate = req_number("deplaning_rate");

  opt("cargo_equipment_positioning_min", s.cargo_positioning);
  opt("cargo_equipment_removal_min", s.cargo_removal);
  s.containers_fwd = static_cast<int>(kv.integer("containers_fwd").value_or(0));
  s.containers_aft = static_cast<int>(kv.integer("containers_aft").value_or(0));
  opt("container_unloading_rate", s.container_unloading);
  opt("container_loading_rate", s.container_loading);

  opt("fuel_quantity_m3", s.fuel_quantity);
  opt("fuel_flow", s.fuel_flow);
  opt("fuel_truck_positioning_min", s.fuel_truck_positioning);
  opt("fuel_truck_connection_min", s.fuel_truck_connection);
  s.passengers_during_refuelling = kv.flag("passengers_admitted_during_refuelling").value_or(false);

  s.catering_trucks = static_cast<int>(kv.integer("catering_trucks").value_or(1));
  opt("catering_positioning_min", s.catering_positioning);
  opt("catering_removal_min", s.catering_removal);
  opt("catering_drive_min", s.catering_drive);
  opt("catering_repositioning_min", s.catering_repositioning);
  if (auto v = kv.text("catering_fste")) {
    // "1R:7, 3R:11"
    for (const auto& item : split_list(*v)) {
      const auto colon = item.find(':');
      if (colon == std::string::npos) throw ValidationError("catering_fste items look like DOOR:COUNT");
      CateringDoor d;
      d.door = item.substr(0, colon);
      try {
        d.fste = std::stod(item.substr(colon + 1));
      } catch (const std::exception&) {
        throw ValidationError("bad FSTE count in '" + item + "'");
      }
      if (d.fste > 0.0) s.catering_doors.push_back(d);
    }
  }
  opt("trolley_exchange_min", s.trolley_exchange);
  if (auto v = kv.number("catering_minimum_min")) s.catering_minimum = *v;
  opt("cleaning_minimum_min", s.cleaning_minimum);
  kv.reject_unknown();
  s.validate();
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open scenario '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::vector<std::pair<std::string, double>> activity_durations(const Scenario& s) {
  s.validate();
  std::vector<std::pair<std::string, double>> out;
  out.emplace_back("Equipment positioning", s.pax_equipment_positioning);
  for (std::size_t d = 0; d < s.doors.size(); ++d) {
    out.emplace_back("Deplaning " + s.doors[d], s.passengers * s.door_shares[d] / s.deplaning_rate);
  }
  out.emplace_back("Cleaning", s.cleaning_minimum);
  for (std::size_t k = 0; k < s.catering_doors.size(); ++k) {
    const auto& cd = s.catering_doors[k];
    double t = cd.fste * s.trolley_exchange;
    if (s.catering_minimum) t = std::max(t, *s.catering_minimum);
    out.emplace_back("Catering " + cd.door, t);
  }
  out.emplace_back("Fuel transfer", s.fuel_quantity > 0.0 ? s.fuel_quantity / s.fuel_flow : 0.0);
  for (std::size_t d = 0; d < s.doors.size(); ++d) {
    out.emplace_back("Boarding " + s.doors[d], s.passengers * s.door_shares[d] / s.boarding_rate);
  }
  out.emplace_back("LSR + headcounting", s.lsr_headcounting);
  out.emplace_back("Equipment removal", s.pax_equipment_removal);
  out.emplace_back("Cargo FWD unloading", s.containers_fwd * s.container_unloading);
  out.emplace_back("Cargo FWD loading", s.containers_fwd * s.container_loading);
  out.emplace_back("Cargo AFT unloading", s.containers_aft * s.container_unloading);
  out.emplace_back("Cargo AFT loading", s.containers_aft * s.container_loading);
  return out;
}

ActivityGraph build_network(const Scenario& s) {
  const auto durations = activity_durations(s);
  const auto dur = [&](const std::string& id) {
    for (const auto& [k, v] : durations) {
      if (k == id) return v;
    }
    throw std::logic_error("no duration for " + id);
  };
  using K = ActivityKind;
  ActivityGraph g;

  g.add("Equipment positioning", dur("Equipment positioning"), K::Service);
  std::vector<Predecessor> deplaned;
  for (const auto& door : s.doors) {
    g.add("Deplaning " + door, dur("Deplaning " + door), K::Service, {{"Equipment positioning"}});
    deplaned.push_back({"Deplaning " + door});
  }
  g.add("Cleaning", dur("Cleaning"), K::Elastic, deplaned);

  std::vector<Predecessor> before_boarding{{"Cleaning"}};

  // One chain per catering truck, doors dealt out in order.
  const int trucks = std::max(1, s.catering_trucks);
  for (int t = 0; t < trucks; ++t) {
    std::string previous;
    for (std::size_t k = static_cast<std::size_t>(t); k < s.catering_doors.size(); k += static_cast<std::size_t>(trucks)) {
      const std::string door = s.catering_doors[k].door;
      const std::string pos = "Catering positioning " + door;
      if (previous.empty()) {
        g.add(pos, s.catering_positioning, K::Positioning).just_in_time = true;
      } else {
        g.add("Catering drive to " + door, s.catering_drive, K::Positioning, {{"Catering removal " + previous}});
        g.add(pos, s.catering_repositioning, K::Positioning, {{"Catering drive to " + door}});
      }
      auto preds = deplaned;
      preds.push_back({pos});
      g.add("Catering " + door, dur("Catering " + door), K::Service, preds);
      g.add("Catering removal " + door, s.catering_removal, K::Positioning, {{"Catering " + door}});
      before_boarding.push_back({"Catering " + door});
      previous = door;
    }
  }

  if (s.fuel_quantity > 0.0) {
    g.add("Fuel truck positioning", s.fuel_truck_positioning, K::Positioning).just_in_time = true;
    g.add("Fuel connection", s.fuel_truck_connection, K::Positioning, {{"Fuel truck positioning"}}).just_in_time = true;
    std::vector<Predecessor> preds{{"Fuel connection"}};
    if (!s.passengers_during_refuelling) {
      preds.insert(preds.end(), deplaned.begin(), deplaned.end());
      before_boarding.push_back({"Fuel transfer"});
    }
    g.add("Fuel transfer", dur("Fuel transfer"), K::Service, preds);
    g.add("Fuel disconnection", s.fuel_truck_connection, K::Positioning, {{"Fuel transfer"}});
    g.add("Fuel truck removal", s.fuel_truck_positioning, K::Positioning, {{"Fuel disconnection"}});
  }

  std::vector<Predecessor> boarded;
  for (const auto& door : s.doors) {
    g.add("Boarding " + door, dur("Boarding " + door), K::Service, before_boarding);
    boarded.push_back({"Boarding " + door});
  }
  g.add("LSR + headcounting", dur("LSR + headcounting"), K::Service, boarded);
  g.add("Equipment removal", dur("Equipment removal"), K::Removal, {{"LSR + headcounting"}});

  for (const auto& [bay, count] : {std::pair{"FWD", s.containers_fwd}, std::pair{"AFT", s.containers_aft}}) {
    if (count == 0) continue;
    const std::string b = bay;
    g.add("Cargo positioning " + b, s.cargo_positioning, K::Positioning);
    g.add("Cargo " + b + " unloading", dur("Cargo " + b + " unloading"), K::Service, {{"Cargo positioning " + b}});
    g.add("Cargo " + b + " loading", dur("Cargo " + b + " loading"), K::Service, {{"Cargo " + b + " unloading"}});
    g.add("Cargo removal " + b, s.cargo_removal, K::Positioning, {{"Cargo " + b + " loading"}});
  }
  return g;
}

const ScheduledActivity& Schedule::at(std::string_view id) const {
  for (const auto& a : activities) {
    if (a.id == id) return a;
  }
  throw std::out_of_range("no activity '" + std::string(id) + "' in schedule");
}

Schedule cpm_schedule(const ActivityGraph& graph) {
  const std::size_t n = graph.activities.size();
  std::map<std::string, std::size_t, std::less<>> index;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = graph.activities[i];
    if (!(a.duration >= 0.0)) throw ValidationError("activity '" + a.id + "' has a negative duration");
    if (!index.emplace(a.id, i).second) throw ValidationError("activity '" + a.id + "' defined twice");
  }
  struct Edge {
    std::size_t to;
    double lag;
  };
  std::vector<std::vector<Edge>> succ(n);
  std::vector<std::vector<Edge>> pred(n);
  std::vector<int> indegree(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& p : graph.activities[i].predecessors) {
      const auto it = index.find(p.id);
      if (it == index.end()) {
        throw ValidationError("activity '" + graph.activities[i].id + "' waits for unknown '" + p.id + "'");
      }
      succ[it->second].push_back({i, p.lag});
      pred[i].push_back({it->second, p.lag});
      ++indegree[i];
    }
  }

  // Kahn's algorithm, lowest graph index first for a stable order.
  std::vector<std::size_t> order;
  order.reserve(n);
  {
    std::vector<std::size_t> ready;
    for (std::size_t i = 0; i < n; ++i) {
      if (indegree[i] == 0) ready.push_back(i);
    }
    while (!ready.empty()) {
      const auto it = std::min_element(ready.begin(), ready.end());
      const std::size_t i = *it;
      ready.erase(it);
      order.push_back(i);
      for (const auto& e : succ[i]) {
        if (--indegree[e.to] == 0) ready.push_back(e.to);
      }
    }
  }
  if (order.size() != n) {
    std::string stuck;
    for (std::size_t i = 0; i < n; ++i) {
      if (indegree[i] > 0) stuck += (stuck.empty() ? "" : ", ") + graph.activities[i].id;
    }
    throw CycleError("precedence cycle through: " + stuck);
  }

  std::vector<double> es(n, 0.0), ef(n, 0.0);
  double makespan = 0.0;
  for (const std::size_t i : order) {
    for (const auto& e : pred[i]) es[i] = std::max(es[i], ef[e.to] + e.lag);
    ef[i] = es[i] + graph.activities[i].duration;
    makespan = std::max(makespan, ef[i]);
  }
  std::vector<double> lf(n, makespan), ls(n, 0.0);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const std::size_t i = *it;
    for (const auto& e : succ[i]) lf[i] = std::min(lf[i], ls[e.to] - e.lag);
    ls[i] = lf[i] - graph.activities[i].duration;
  }

  Schedule out;
  out.tat = makespan;
  out.activities.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = graph.activities[i];
    auto& s = out.activities[i];
    s.id = a.id;
    s.kind = a.kind;
    s.earliest_start = es[i];
    s.start = es[i];
    s.end = ef[i];
    s.slack = ls[i] - es[i];
    s.critical = s.slack < kSlackEpsilon && (a.kind == ActivityKind::Service || a.kind == ActivityKind::Removal);
  }
  // Drawn positions: just-in-time vehicles slide right, elastic work fills its window.
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const std::size_t i = *it;
    const auto& a = graph.activities[i];
    if (!a.just_in_time && a.kind != ActivityKind::Elastic) continue;
    double window_end = succ[i].empty() ? makespan : INFINITY;
    for (const auto& e : succ[i]) window_end = std::min(window_end, out.activities[e.to].start - e.lag);
    auto& s = out.activities[i];
    if (a.kind == ActivityKind::Elastic) {
      s.end = std::max(s.end, window_end);
    } else {
      s.end = std::max(s.end, window_end);
      s.start = s.end - a.duration;
    }
  }

  std::vector<std::size_t> crit;
  for (std::size_t i = 0; i < n; ++i) {
    if (out.activities[i].critical) crit.push_back(i);
  }
  std::stable_sort(crit.begin(), crit.end(), [&](std::size_t a, std::size_t b) {
    const auto& x = out.activities[a];
    const auto& y = out.activities[b];
    return x.start != y.start ? x.start < y.start : x.end < y.end;
  });
  for (const std::size_t i : crit) out.critical_path.push_back(out.activities[i].id);
  return out;
}

namespace {

std::string minutes(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  return out + "\"";
}

}  // namespace

std::string gantt_csv(const Schedule& schedule) {
  std::string out = "activity,start_min,end_min,critical,kind\n";
  for (const auto& a : schedule.activities) {
    out += csv_field(a.id) + ',' + minutes(a.start) + ',' + minutes(a.end) + ',' + (a.critical ? "true" : "false") +
           ',' + std::string(kind_name(a.kind)) + '\n';
  }
  return out;
}

nlohmann::json gantt_json(const Schedule& schedule) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& a : schedule.activities) {
    rows.push_back({{"activity", a.id},
                    {"start_min", a.start},
                    {"end_min", a.end},
                    {"critical", a.critical},
                    {"kind", kind_name(a.kind)},
                    {"slack_min", a.slack}});
  }
  return {{"tat_min", schedule.tat}, {"critical_path", schedule.critical_path}, {"activities", std::move(rows)}};
}

}  // namespace turnsim
