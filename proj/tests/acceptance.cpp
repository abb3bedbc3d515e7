// Acceptance run: one PASS/FAIL line per criterion, details indented below.
// Exit status is non-zero when any criterion fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "support/random_cabin.hpp"
#include "turnsim/validation.hpp"

using namespace turnsim;
using namespace turnsim::testing;

namespace {

struct Outcome {
  bool pass = true;
  std::vector<std::string> details;

  void note(bool ok, const std::string& line) {
    pass = pass && ok;
    details.push_back(std::string(ok ? "ok    " : "FAILED ") + line);
  }
};

Outcome from_checks(const std::vector<Check>& checks) {
  Outcome o;
  for (const auto& c : checks) o.note(c.pass, c.name + ": " + c.measured + "  [" + c.expected + "]");
  return o;
}

// ---- criterion 7 pieces --------------------------------------------------

SimConfig random_config(Rng& rng, int max_lanes) {
  SimConfig c;
  c.grid = std::make_shared<const CabinGrid>(parse_layout(render(random_spec(rng, max_lanes))));
  c.load_factor = 0.3 + 0.7 * rng.uniform();
  c.interference_factor = rng.uniform();
  c.luggage = LuggageTime::preset(rng.below(2) ? "A" : "B");
  c.strategy.kind = static_cast<StrategyKind>(rng.below(4));
  c.seed = RngSeed{rng()};
  c.record_events = true;
  c.check_invariants = true;
  return c;
}

bool same_result(const SimResult& a, const SimResult& b) {
  if (a.elapsed != b.elapsed || a.events.size() != b.events.size() || a.seat_of != b.seat_of) return false;
  for (std::size_t i = 0; i < a.events.size(); ++i) {
    const auto& x = a.events[i];
    const auto& y = b.events[i];
    if (x.tick != y.tick || x.passenger != y.passenger || x.state != y.state || !(x.cell == y.cell)) return false;
  }
  return true;
}

// Arrival order at every aisle cell past the entry galley must follow door order.
bool fifo_holds(const CabinGrid& g, const SimResult& r, int galley) {
  std::map<int, int> rank, last_cell;
  std::map<int, int> last_rank_at;
  for (const auto& e : r.events) {
    if (e.state == PassengerState::AtDoor && g.kind(e.cell) == CellKind::Door) {
      rank.emplace(e.passenger, static_cast<int>(rank.size()));
    }
    if (e.cell.x < 0) continue;
    const int idx = g.index(e.cell);
    auto [it, fresh] = last_cell.emplace(e.passenger, -1);
    if (it->second == idx) continue;
    it->second = idx;
    const bool moving = e.state == PassengerState::Walking || e.state == PassengerState::AtDoor;
    if (!moving || g.kind(e.cell) != CellKind::Aisle || e.cell.x <= galley) continue;
    const int k = rank.at(e.passenger);
    auto [slot, first] = last_rank_at.emplace(idx, k);
    if (!first) {
      if (k < slot->second) return false;
      slot->second = k;
    }
  }
  return true;
}

double weibull_cdf(double x, const WeibullParams& p) {
  return x <= p.theta ? 0.0 : 1.0 - std::exp(-std::pow((x - p.theta) / p.beta, p.alpha));
}

Outcome property_suite() {
  Outcome o;
  Rng rng(20240601);

  int cabins = 0, violations = 0, nondeterministic = 0;
  std::string first_problem;
  for (int trial = 0; trial < 100; ++trial) {
    auto cfg = random_config(rng, 2);
    for (const auto dir : {Direction::Boarding, Direction::Deboarding}) {
      cfg.direction = dir;
      try {
        const auto a = run(cfg);
        const auto b = run(cfg);
        if (const auto v = replay_violation(*cfg.grid, a, dir); !v.empty()) {
          ++violations;
          if (first_problem.empty()) first_problem = v;
        }
        if (!same_result(a, b)) ++nondeterministic;
      } catch (const std::exception& e) {
        ++violations;
        if (first_problem.empty()) first_problem = e.what();
      }
    }
    ++cabins;
  }
  o.note(violations == 0, "exclusivity + conservation, " + std::to_string(cabins) + " random cabins x 2 directions: " +
                              std::to_string(violations) + " violations" +
                              (first_problem.empty() ? "" : " (" + first_problem + ")"));
  o.note(nondeterministic == 0, "seed determinism: " + std::to_string(nondeterministic) + " mismatches");

  int fifo_bad = 0;
  for (int trial = 0; trial < 100; ++trial) {
    auto spec = random_spec(rng, 1);
    SimConfig cfg;
    cfg.grid = std::make_shared<const CabinGrid>(parse_layout(render(spec)));
    cfg.active_doors = {1};
    cfg.interference_factor = 1.0;
    cfg.load_factor = 0.5 + 0.5 * rng.uniform();
    cfg.luggage = LuggageTime::preset("A");
    cfg.seed = RngSeed{rng()};
    cfg.record_events = true;
    if (!fifo_holds(*cfg.grid, run(cfg), spec.galley)) ++fifo_bad;
  }
  o.note(fifo_bad == 0, "FIFO, IF=1 single lane, 100 random cabins: " + std::to_string(fifo_bad) + " out of order");

  for (const auto& [name, params] : {std::pair{"walk", kWalkPreset}, std::pair{"A", kLuggageA}, std::pair{"B", kLuggageB}}) {
    const int n = 100000;
    std::vector<double> xs(n);
    Rng draw(7);
    for (auto& x : xs) x = sample_weibull(params, draw);
    std::sort(xs.begin(), xs.end());
    double ks = 0.0;
    for (int i = 0; i < n; ++i) {
      const double f = weibull_cdf(xs[static_cast<std::size_t>(i)], params);
      ks = std::max({ks, std::abs(f - static_cast<double>(i) / n), std::abs(static_cast<double>(i + 1) / n - f)});
    }
    char line[160];
    std::snprintf(line, sizeof line, "Weibull %s, 1e5 draws: min %.4f >= theta %.2f, KS %.4f < 0.01", name, xs.front(),
                  params.theta, ks);
    o.note(xs.front() >= params.theta && ks < 0.01, line);
  }

  int cpm_bad = 0;
  for (int trial = 0; trial < 100; ++trial) {
    ActivityGraph g;
    const int n = 2 + static_cast<int>(rng.below(30));
    for (int i = 0; i < n; ++i) {
      std::vector<Predecessor> preds;
      for (int j = 0; j < i; ++j) {
        if (rng.below(4) == 0) preds.push_back({"a" + std::to_string(j), rng.below(3) == 0 ? rng.uniform() : 0.0});
      }
      g.add("a" + std::to_string(i), 0.5 + 10.0 * rng.uniform(), ActivityKind::Service, std::move(preds));
    }
    const auto s = cpm_schedule(g);
    bool ok = !s.critical_path.empty();
    double tat = 0.0;
    for (std::size_t i = 0; i < g.activities.size(); ++i) {
      const auto& sa = s.activities[i];
      ok = ok && sa.slack >= -1e-9 && sa.critical == (sa.slack < kSlackEpsilon);
      tat = std::max(tat, sa.end);
      for (const auto& p : g.activities[i].predecessors) ok = ok && sa.start + 1e-9 >= s.at(p.id).end + p.lag;
    }
    ok = ok && std::abs(tat - s.tat) < 1e-9;
    if (!ok) ++cpm_bad;
  }
  o.note(cpm_bad == 0, "CPM slack >= 0, precedence, zero-slack = critical on 100 random networks: " +
                           std::to_string(cpm_bad) + " bad");
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  ValidationOptions opt;
  opt.data_dir = TURNSIM_DATA_DIR;
  if (argc > 1) opt.runs = std::atoi(argv[1]);

  struct Criterion {
    int id;
    const char* title;
    std::function<Outcome()> body;
  };
  const std::vector<Criterion> criteria{
      {1, "boarding times of the reference aircraft", [&] { return from_checks(validate_boarding(opt)); }},
      {2, "deboarding times of the reference aircraft", [&] { return from_checks(validate_deboarding(opt)); }},
      {3, "PrP boarding/deboarding rates", [&] { return from_checks(validate_rates(opt)); }},
      {4, "turnaround times and critical paths", [&] { return from_checks(validate_turnaround(opt)); }},
      {5, "wide vs narrow aisle luggage sensitivity", [&] { return from_checks(validate_luggage_sweep(opt)); }},
      {6, "door saturation", [&] { return from_checks(validate_door_saturation(opt)); }},
      {7, "property suite on random inputs", property_suite},
  };

  std::printf("acceptance: %d runs per batch\n", opt.runs);
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.body();
    } catch (const std::exception& e) {
      o.note(false, std::string("threw: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.id == 1) o.note(secs < 300.0, "runtime " + std::to_string(static_cast<int>(secs)) + " s < 300 s");
    std::printf("%s criterion %d: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.title, secs);
    for (const auto& d : o.details) std::printf("        %s\n", d.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
