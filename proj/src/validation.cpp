#include "turnsim/validation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>

#include "turnsim/errors.hpp"

namespace turnsim {

namespace {

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, pattern, a, b, c);
  return buf;
}

std::string clock(double seconds) {
  const long s = std::lround(seconds);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%ld:%02ld", s / 60, s % 60);
  return buf;
}

bool within(double value, double target, double rel) { return std::abs(value - target) <= rel * target; }

struct Row {
  std::string label;
  std::string layout;
  double lf;
  std::vector<int> doors;
  const char* preset;
  double target;        // seconds
  double band_lo = 0.0;  // scatter band, seconds; 0 when not declared
  double band_hi = 0.0;
};

const std::vector<Row>& aircraft_rows() {
  static const std::vector<Row> rows{
      {"B737 LF 0.85 1 door", "b737", 0.85, {1}, "B", 0, 0, 0},
      {"B737 LF 0.94 1 door", "b737", 0.94, {1}, "B", 0, 0, 0},
      {"A320 LF 0.94 2 doors", "a320", 0.94, {1, 2}, "B", 0, 0, 0},
      {"B767 LF 0.87 1 door", "b767", 0.87, {1}, "A", 0, 0, 0},
      {"A330 LF 1 2 doors", "a330", 1.0, {1, 2}, "A", 0, 0, 0},
  };
  return rows;
}

std::vector<Check> aircraft_table(const ValidationOptions& o, Direction dir, const double (&targets)[5],
                                  const std::map<int, std::pair<double, double>>& bands) {
  std::vector<Check> out;
  for (std::size_t i = 0; i < aircraft_rows().size(); ++i) {
    const auto& r = aircraft_rows()[i];
    const auto stats = run_batch(shipped_config(o, r.layout, r.lf, r.doors, r.preset, dir), o.runs, o.base_seed, o.threads);
    const double target = targets[i];
    Check c;
    c.name = std::string(dir == Direction::Boarding ? "BT " : "DT ") + r.label;
    c.measured = clock(stats.mean) + fmt(" (%+.1f%%)", (stats.mean - target) / target * 100.0) + ", scatter " +
                 clock(stats.min) + "-" + clock(stats.max);
    c.expected = clock(target) + " +/-10%";
    c.pass = within(stats.mean, target, 0.10) && stats.failures == 0;
    if (const auto it = bands.find(static_cast<int>(i)); it != bands.end()) {
      c.expected += ", scatter inside " + clock(it->second.first) + "-" + clock(it->second.second);
      c.pass = c.pass && stats.min >= it->second.first && stats.max <= it->second.second;
    }
    if (stats.failures > 0) c.measured += fmt(", %.0f failed runs", stats.failures);
    out.push_back(std::move(c));
  }
  return out;
}

const std::vector<std::vector<int>>& prp_door_sets() {
  static const std::vector<std::vector<int>> sets{{1}, {1, 3}, {1, 2, 3}};
  return sets;
}

std::string doors_label(const std::vector<int>& doors) {
  std::string s;
  for (const int d : doors) s += (s.empty() ? "" : ",") + std::to_string(d) + "L";
  return s;
}

// Boarding batches on the wide PrP cabin, shared by two suites.
std::vector<BatchStats> prp_boarding(const ValidationOptions& o) {
  std::vector<BatchStats> out;
  for (const auto& doors : prp_door_sets()) {
    out.push_back(run_batch(shipped_config(o, "prp_wide", 1.0, doors, "A", Direction::Boarding, 0.5), o.runs,
                            o.base_seed, o.threads));
  }
  return out;
}

std::vector<Check> door_saturation_checks(const std::vector<BatchStats>& bt) {
  std::vector<Check> out;
  const double m1 = bt[0].mean, m2 = bt[1].mean, m3 = bt[2].mean;
  Check order;
  order.name = "PrP BT 1 door > 2 doors > 3 doors";
  order.measured = clock(m1) + " > " + clock(m2) + " > " + clock(m3);
  order.expected = "strictly decreasing";
  order.pass = m1 > m2 && m2 > m3;
  out.push_back(order);
  Check saving;
  saving.name = "PrP door saving saturates";
  saving.measured = fmt("1->2 saves %.0f s, 2->3 saves %.0f s", m1 - m2, m2 - m3);
  saving.expected = "2->3 saving < 1->2 saving";
  saving.pass = (m2 - m3) < (m1 - m2);
  out.push_back(saving);
  return out;
}

std::string join(const std::vector<std::string>& items) {
  std::string s;
  for (const auto& i : items) s += (s.empty() ? "" : ", ") + i;
  return s;
}

}  // namespace

SimConfig shipped_config(const ValidationOptions& o, const std::string& layout, double load_factor,
                         std::vector<int> doors, const std::string& preset, Direction direction,
                         double interference) {
  SimConfig c;
  c.grid = std::make_shared<const CabinGrid>(load_layout(o.data_dir + "/layouts/" + layout + ".cab"));
  c.load_factor = load_factor;
  c.active_doors = std::move(doors);
  c.luggage = LuggageTime::preset(preset);
  c.direction = direction;
  c.interference_factor = interference;
  return c;
}

std::vector<Check> validate_boarding(const ValidationOptions& o) {
  static const double targets[5] = {13 * 60 + 55, 15 * 60 + 11, 7 * 60 + 55, 12 * 60 + 57, 9 * 60 + 50};
  return aircraft_table(o, Direction::Boarding, targets,
                        {{3, {12 * 60 + 5, 14 * 60 + 45}}, {4, {8 * 60 + 20, 11 * 60 + 15}}});
}

std::vector<Check> validate_deboarding(const ValidationOptions& o) {
  static const double targets[5] = {9 * 60, 9 * 60 + 50, 5 * 60, 10 * 60 + 40, 6 * 60};
  return aircraft_table(o, Direction::Deboarding, targets, {});
}

std::vector<Check> validate_rates(const ValidationOptions& o) {
  static const double boarding[3] = {18.7, 17.7, 17.1};
  static const double deboarding[3] = {26.8, 26.5, 25.7};
  std::vector<Check> out;
  const auto bt = prp_boarding(o);
  for (std::size_t i = 0; i < 3; ++i) {
    const double rate = bt[i].rate();
    out.push_back({"PrP boarding rate " + doors_label(prp_door_sets()[i]),
                   fmt("%.2f pax/min/door (BT %.0f s)", rate, bt[i].mean), fmt("%.1f +/-10%%", boarding[i]),
                   within(rate, boarding[i], 0.10)});
  }
  for (std::size_t i = 0; i < 3; ++i) {
    const auto dt = run_batch(shipped_config(o, "prp_wide", 1.0, prp_door_sets()[i], "A", Direction::Deboarding, 0.5),
                              o.runs, o.base_seed, o.threads);
    const double rate = dt.rate();
    out.push_back({"PrP deboarding rate " + doors_label(prp_door_sets()[i]),
                   fmt("%.2f pax/min/door (DT %.0f s)", rate, dt.mean), fmt("%.1f +/-10%%", deboarding[i]),
                   within(rate, deboarding[i], 0.10)});
  }
  return out;
}

std::vector<Check> validate_turnaround(const ValidationOptions& o) {
  struct Case {
    const char* scenario;
    double tat;
    std::vector<std::string> critical;  // empty: no chart to compare against
  };
  const std::vector<Case> cases{
      {"prp_full", 55.0,
       {"Equipment positioning", "Deplaning 1L", "Catering 1R", "Catering 3R", "Boarding 1L", "LSR + headcounting",
        "Equipment removal"}},
      {"a320_full", 44.0, {}},
      {"prp_outstation", 24.5,
       {"Equipment positioning", "Deplaning 1L", "Deplaning 3L", "Catering 1R", "Boarding 1L", "Boarding 3L",
        "LSR + headcounting", "Equipment removal"}},
      {"a320_outstation", 22.0, {}},
  };
  std::vector<Check> out;
  for (const auto& c : cases) {
    const auto schedule = cpm_schedule(build_network(load_scenario(o.data_dir + "/scenarios/" + c.scenario + ".scn")));
    out.push_back({std::string("TAT ") + c.scenario, fmt("%.2f min", schedule.tat), fmt("%.1f +/-0.5 min", c.tat),
                   std::abs(schedule.tat - c.tat) <= 0.5});
    if (!c.critical.empty()) {
      const std::set<std::string> got(schedule.critical_path.begin(), schedule.critical_path.end());
      const std::set<std::string> want(c.critical.begin(), c.critical.end());
      out.push_back({std::string("critical path ") + c.scenario, join(schedule.critical_path), join(c.critical),
                     got == want});
    }
  }
  return out;
}

std::vector<Check> validate_luggage_sweep(const ValidationOptions& o) {
  std::vector<Check> out;
  for (const char* layout : {"prp_wide", "prp_narrow"}) {
    std::vector<double> means;
    std::string values;
    for (int t = 6; t <= 16; t += 2) {
      auto c = shipped_config(o, layout, 1.0, {1}, "A", Direction::Boarding, 0.0);
      c.luggage = LuggageTime::fixed(t);
      means.push_back(run_batch(c, o.runs, o.base_seed, o.threads).mean);
      values += (values.empty() ? "" : " ") + fmt("%.0f", means.back());
    }
    const auto [lo, hi] = std::minmax_element(means.begin(), means.end());
    const double spread = (*hi - *lo) / *lo;
    Check c;
    if (std::string(layout) == "prp_wide") {
      c.name = "wide PrP BT vs t_lug 6..16 s";
      c.measured = values + fmt(" s, spread %.1f%%", spread * 100.0);
      c.expected = "spread < 10%";
      c.pass = spread < 0.10;
    } else {
      const bool increasing = std::adjacent_find(means.begin(), means.end(), std::greater_equal<>()) == means.end();
      const double rise = (means.back() - means.front()) / means.front();
      c.name = "narrow PrP BT vs t_lug 6..16 s";
      c.measured = values + fmt(" s, rise %.1f%%", rise * 100.0) + (increasing ? ", increasing" : ", not monotone");
      c.expected = "strictly increasing, rise > 25%";
      c.pass = increasing && rise > 0.25;
    }
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<Check> validate_door_saturation(const ValidationOptions& o) { return door_saturation_checks(prp_boarding(o)); }

std::vector<Check> validate_suite(const std::string& suite, const ValidationOptions& o) {
  if (suite == "table3") return validate_boarding(o);
  if (suite == "table4") return validate_deboarding(o);
  if (suite == "table6") return validate_rates(o);
  if (suite == "table7") return validate_turnaround(o);
  if (suite == "fig8") return validate_luggage_sweep(o);
  if (suite == "doors") return validate_door_saturation(o);
  if (suite == "all") {
    std::vector<Check> all;
    for (const char* s : {"table3", "table4", "table6", "table7", "fig8", "doors"}) {
      auto part = validate_suite(s, o);
      all.insert(all.end(), part.begin(), part.end());
    }
    return all;
  }
  throw ValidationError("unknown suite '" + suite + "' (table3, table4, table6, table7, fig8, doors, all)");
}

std::string format_checks(const std::vector<Check>& checks) {
  std::size_t width = 0;
  for (const auto& c : checks) width = std::max(width, c.name.size());
  std::string out;
  for (const auto& c : checks) {
    out += c.pass ? "PASS  " : "FAIL  ";
    out += c.name + std::string(width - c.name.size() + 2, ' ');
    out += c.measured + "   [expected " + c.expected + "]\n";
  }
  return out;
}

}  // namespace turnsim
