#include "turnsim/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <thread>

#include "turnsim/errors.hpp"

namespace turnsim {

namespace {

RunSummary run_one(const SimConfig& config, std::uint64_t seed) {
  RunSummary out;
  out.seed = seed;
  SimConfig c = config;
  c.seed.value = seed;
  c.record_events = false;
  try {
    const SimResult r = run(c);
    out.elapsed = r.elapsed;
    out.passengers = r.passengers;
    out.maneuvers = r.maneuvers;
    out.virtual_maneuvers = r.virtual_maneuvers;
  } catch (const std::exception& e) {
    out.error = e.what();
  }
  return out;
}

std::string number(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string fixed(double v, int digits) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

double compute_rate(double n_pax, int n_doors, double elapsed) {
  if (elapsed == 0.0) throw DivisionError("rate undefined for zero elapsed time");
  if (!(n_pax > 0.0) || n_doors <= 0 || !(elapsed > 0.0)) {
    throw ValidationError("rate needs positive passengers, doors and elapsed time");
  }
  return n_pax / (elapsed / 60.0) / n_doors;
}

double BatchStats::rate() const { return compute_rate(passengers, doors, mean); }

int active_door_count(const SimConfig& config) {
  if (!config.active_doors.empty()) return static_cast<int>(config.active_doors.size());
  return config.grid ? static_cast<int>(config.grid->doors().size()) : 0;
}

BatchStats run_batch(const SimConfig& config, int n_runs, std::uint64_t base_seed, int threads) {
  if (n_runs < 1) throw ValidationError("a batch needs at least one run");
  config.validate();

  BatchStats stats;
  stats.per_run.resize(static_cast<std::size_t>(n_runs));
  if (threads <= 0) threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  threads = std::min(threads, n_runs);

  std::atomic<int> next{0};
  const auto worker = [&] {
    for (int i = next++; i < n_runs; i = next++) {
      stats.per_run[static_cast<std::size_t>(i)] = run_one(config, base_seed + static_cast<std::uint64_t>(i));
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  // Aggregate in seed order so the floating-point sums never depend on scheduling.
  double sum = 0.0;
  stats.min = INFINITY;
  stats.max = -INFINITY;
  for (const auto& r : stats.per_run) {
    if (!r.error.empty()) {
      ++stats.failures;
      continue;
    }
    ++stats.n_runs;
    sum += r.elapsed;
    stats.min = std::min(stats.min, r.elapsed);
    stats.max = std::max(stats.max, r.elapsed);
    stats.passengers = r.passengers;
  }
  if (stats.n_runs == 0) {
    throw std::runtime_error("every run of the batch failed: " + stats.per_run.front().error);
  }
  stats.mean = sum / stats.n_runs;
  if (stats.n_runs > 1) {
    double sq = 0.0;
    for (const auto& r : stats.per_run) {
      if (r.error.empty()) sq += (r.elapsed - stats.mean) * (r.elapsed - stats.mean);
    }
    stats.std = std::sqrt(sq / (stats.n_runs - 1));
  }
  stats.doors = active_door_count(config);
  return stats;
}

std::vector<SweepRow> sweep(const SimConfig& base, const SweepSpec& spec) {
  const auto or_base = [](const auto& grid, auto value) {
    using T = decltype(value);
    return grid.empty() ? std::vector<T>{value} : grid;
  };
  const auto ifs = or_base(spec.interference, base.interference_factor);
  const auto lfs = or_base(spec.load, base.load_factor);
  const auto doors = or_base(spec.door_sets, base.active_doors);

  std::vector<std::optional<double>> lugs;
  for (const double t : spec.luggage_constant) lugs.emplace_back(t);
  if (lugs.empty()) lugs.emplace_back(std::nullopt);

  std::vector<SweepRow> rows;
  for (const double i_f : ifs) {
    for (const double lf : lfs) {
      for (const auto& lug : lugs) {
        for (const auto& ds : doors) {
          SimConfig c = base;
          c.interference_factor = i_f;
          c.load_factor = lf;
          if (lug) c.luggage = LuggageTime::fixed(*lug);
          c.active_doors = ds;
          SweepRow row;
          row.interference = i_f;
          row.load = lf;
          row.luggage = c.luggage.label;
          row.doors = ds;
          row.stats = run_batch(c, spec.n_runs, spec.base_seed, spec.threads);
          rows.push_back(std::move(row));
        }
      }
    }
  }
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "IF,LF,t_lug,n_doors,n_runs,mean_s,min_s,max_s,std_s,rate\n";
  for (const auto& r : rows) {
    const auto& s = r.stats;
    out << number(r.interference) << ',' << number(r.load) << ',' << r.luggage << ',' << s.doors << ','
        << s.n_runs << ',' << fixed(s.mean, 2) << ',' << fixed(s.min, 2) << ',' << fixed(s.max, 2) << ','
        << fixed(s.std, 2) << ',' << fixed(s.rate(), 3) << '\n';
  }
  return out.str();
}

nlohmann::json batch_json(const BatchStats& s) {
  nlohmann::json runs = nlohmann::json::array();
  for (const auto& r : s.per_run) {
    nlohmann::json j{{"seed", r.seed}};
    if (r.error.empty()) {
      j["elapsed_s"] = r.elapsed;
      j["maneuvers"] = r.maneuvers;
      j["virtual_maneuvers"] = r.virtual_maneuvers;
    } else {
      j["error"] = r.error;
    }
    runs.push_back(std::move(j));
  }
  return {{"n_runs", s.n_runs},   {"failures", s.failures}, {"passengers", s.passengers},
          {"n_doors", s.doors},   {"mean_s", s.mean},       {"min_s", s.min},
          {"max_s", s.max},       {"std_s", s.std},         {"rate", s.rate()},
          {"runs", std::move(runs)}};
}

nlohmann::json sweep_json(const std::vector<SweepRow>& rows) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : rows) {
    const auto& s = r.stats;
    out.push_back({{"IF", r.interference},
                   {"LF", r.load},
                   {"t_lug", r.luggage},
                   {"doors", r.doors},
                   {"n_doors", s.doors},
                   {"n_runs", s.n_runs},
                   {"failures", s.failures},
                   {"mean_s", s.mean},
                   {"min_s", s.min},
                   {"max_s", s.max},
                   {"std_s", s.std},
                   {"rate", s.rate()}});
  }
  return out;
}

}  // namespace turnsim
