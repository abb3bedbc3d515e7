#pragma once

// Hand-rolled generators shared by the property tests and the acceptance run.

#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "turnsim/cabin.hpp"
#include "turnsim/engine.hpp"
#include "turnsim/stochastic.hpp"

namespace turnsim::testing {

struct CabinSpec {
  std::vector<std::pair<char, int>> blocks;  // top to bottom: ('S', seats) or ('A', lanes)
  int seat_columns = 4;
  int galley = 1;  // aisle columns before and after the seat region
  bool rear_door = false;
  bool mid_door = false;
  double unit_h = 0.78;
  double unit_v = 0.4;
};

inline int pick(Rng& rng, int lo, int hi) { return lo + static_cast<int>(rng.below(static_cast<std::uint64_t>(hi - lo + 1))); }

/// Random cabin: 1-2 aisles of `max_lanes` lanes at most, 1-3 seats per block.
inline CabinSpec random_spec(Rng& rng, int max_lanes) {
  CabinSpec s;
  const int aisles = pick(rng, 1, 2);
  s.blocks.push_back({'S', pick(rng, 1, 3)});
  for (int a = 0; a < aisles; ++a) {
    s.blocks.push_back({'A', pick(rng, 1, max_lanes)});
    s.blocks.push_back({'S', pick(rng, 1, 3)});
  }
  s.seat_columns = pick(rng, 2, 10);
  s.galley = max_lanes > 1 ? pick(rng, 1, 2) : 1;
  s.rear_door = rng.below(2) == 0;
  s.mid_door = s.seat_columns >= 4 && rng.below(3) == 0;
  s.unit_h = 0.5 + 0.5 * rng.uniform();
  s.unit_v = 0.3 + 0.3 * rng.uniform();
  return s;
}

inline std::string render(const CabinSpec& s) {
  std::vector<char> kinds;
  for (const auto& [k, n] : s.blocks) {
    for (int i = 0; i < n; ++i) kinds.push_back(k);
  }
  const int nv = static_cast<int>(kinds.size()) + 2;
  const int mid_x = s.mid_door ? 1 + s.galley + s.seat_columns / 2 : -1;
  const int nh = 1 + s.galley + s.seat_columns + (s.mid_door ? 1 : 0) + s.galley + 1;
  std::vector<std::string> g(static_cast<std::size_t>(nv), std::string(static_cast<std::size_t>(nh), '#'));
  for (int y = 1; y < nv - 1; ++y) {
    for (int x = 1; x < nh - 1; ++x) {
      const bool galley = x <= s.galley || x >= nh - 1 - s.galley || x == mid_x;
      g[static_cast<std::size_t>(y)][static_cast<std::size_t>(x)] =
          galley ? '.' : (kinds[static_cast<std::size_t>(y - 1)] == 'S' ? 'S' : '.');
    }
  }
  g[0][static_cast<std::size_t>(s.galley)] = '1';
  if (s.mid_door) g[0][static_cast<std::size_t>(mid_x)] = '2';
  if (s.rear_door) g[0][static_cast<std::size_t>(nh - 1 - s.galley)] = '3';
  std::ostringstream out;
  out << "# generated\nL_H=" << s.unit_h * nh << " L_V=" << s.unit_v * nv << "\n";
  for (const auto& row : g) out << row << '\n';
  return out.str();
}

/// Replays an event log and checks, at every tick boundary, that no two
/// passengers share a cell and that queued + on board + finished = n.
/// Returns an empty string when all is well.
inline std::string replay_violation(const CabinGrid& grid, const SimResult& r, Direction direction) {
  struct Where {
    PassengerState state = PassengerState::Queued;
    Coord cell{-1, -1};
  };
  const int n = r.passengers;
  std::vector<Where> at(static_cast<std::size_t>(n));
  if (direction == Direction::Deboarding) {
    for (auto& w : at) w.state = PassengerState::Seated;
  }
  const auto verify = [&](std::int64_t tick) -> std::string {
    std::map<int, int> owner;
    int queued = 0, aboard = 0, done = 0;
    for (int i = 0; i < n; ++i) {
      const auto& w = at[static_cast<std::size_t>(i)];
      if (w.state == PassengerState::Queued) {
        ++queued;
        continue;
      }
      if (w.state == PassengerState::Exited) {
        ++done;
        continue;
      }
      (direction == Direction::Boarding && w.state == PassengerState::Seated) ? ++done : ++aboard;
      if (!grid.in_grid(w.cell) || grid.kind(w.cell) == CellKind::Wall) {
        return "passenger " + std::to_string(i) + " off the walkable grid at tick " + std::to_string(tick);
      }
      const auto [it, fresh] = owner.emplace(grid.index(w.cell), i);
      if (!fresh) {
        return "passengers " + std::to_string(it->second) + " and " + std::to_string(i) + " share (" +
               std::to_string(w.cell.x) + "," + std::to_string(w.cell.y) + ") at tick " + std::to_string(tick);
      }
    }
    if (queued + aboard + done != n) return "passenger count not conserved at tick " + std::to_string(tick);
    return {};
  };
  std::size_t k = 0;
  while (k < r.events.size()) {
    const std::int64_t tick = r.events[k].tick;
    for (; k < r.events.size() && r.events[k].tick == tick; ++k) {
      const auto& e = r.events[k];
      if (e.passenger < 0 || e.passenger >= n) return "event for unknown passenger";
      auto& w = at[static_cast<std::size_t>(e.passenger)];
      w.state = e.state;
      if (e.cell.x >= 0) w.cell = e.cell;
    }
    if (auto v = verify(tick); !v.empty()) return v;
  }
  // Final state must agree with the snapshot.
  for (int i = 0; i < n; ++i) {
    const auto& w = at[static_cast<std::size_t>(i)];
    const bool placed = w.state != PassengerState::Queued && w.state != PassengerState::Exited;
    if (placed && r.final_occupancy[static_cast<std::size_t>(grid.index(w.cell))] != i) {
      return "final occupancy disagrees with the event log for passenger " + std::to_string(i);
    }
  }
  return {};
}

}  // namespace turnsim::testing
