#pragma once

#include <array>
#include <climits>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "turnsim/cabin.hpp"
#include "turnsim/stochastic.hpp"
#include "turnsim/strategies.hpp"

namespace turnsim {

enum class Direction { Boarding, Deboarding };

enum class DoorAssignment {
  Nearest,   // closest active door to the row entry (Manhattan)
  Balanced,  // equal shares, front-most passengers to the front-most door
};

enum class PassengerState : std::uint8_t {
  Queued,
  AtDoor,
  Walking,
  Storing,
  InterferenceActor,
  InterferenceDisplaced,
  Seated,
  Standing,
  Retrieving,
  Exited,
};

std::string_view state_name(PassengerState state);
/// Whether the engine may move a passenger from `from` to `to`.
bool transition_allowed(PassengerState from, PassengerState to);

/// Luggage stowing/retrieval time: a Weibull preset or a constant.
struct LuggageTime {
  std::optional<WeibullParams> distribution;
  double constant = 0.0;
  std::string label = "B";

  static LuggageTime preset(std::string_view name);  // "A" or "B"
  static LuggageTime fixed(double seconds);
  double draw(Rng& rng) const;
};

/// Reference length, in metres, covered in one draw of the walking-time
/// distribution. A horizontal cell of length u_H is held for
/// t_H * u_H / reference; a vertical one for that divided by gamma.
inline constexpr double kDefaultWalkReference = 4.4;

struct SimConfig {
  std::shared_ptr<const CabinGrid> grid;
  double load_factor = 1.0;
  double interference_factor = 0.0;
  std::vector<int> active_doors;  // door ids; empty selects every door
  LuggageTime luggage = LuggageTime::preset("B");
  WeibullParams walk = kWalkPreset;
  Direction direction = Direction::Boarding;
  BoardingStrategy strategy;
  DoorAssignment door_assignment = DoorAssignment::Balanced;
  RngSeed seed;
  double tick = 0.1;
  double equipment_delay = 120.0;
  double door_time = 2.0;
  double seat_cell_time = 1.8;
  /// Minimum hold of the door cell by a leaving passenger; door_time if unset.
  std::optional<double> exit_door_time;
  double walk_reference = kDefaultWalkReference;
  /// Draw a fresh walking time for every cell instead of once per passenger.
  bool resample_walk = false;
  /// Deboarding multiplier on luggage time; defaults to 0.5 on narrow-aisle
  /// cabins and 1 on cabins with wide aisles.
  std::optional<double> retrieval_factor;
  std::int64_t max_ticks = 1'000'000;
  /// Explicit seat indices (deboarding starting pattern or fixed boarding set).
  std::optional<std::vector<int>> seating;
  bool record_events = false;
  bool check_invariants = false;

  /// Throws ValidationError on out-of-range values.
  void validate() const;
};

struct PassengerEvent {
  std::int64_t tick = 0;
  int passenger = 0;
  PassengerState state = PassengerState::Queued;
  Coord cell{-1, -1};
};

struct SimResult {
  double elapsed = 0.0;  // BT or DT, seconds
  std::int64_t ticks = 0;
  int passengers = 0;
  int maneuvers = 0;          // seat-interference maneuvers (both kinds)
  int virtual_maneuvers = 0;  // subset resolved in place without cell moves
  double first_exit = 0.0;    // deboarding only
  double last_exit = 0.0;
  std::vector<int> seat_of;  // passenger -> seat index
  std::vector<int> door_of;  // passenger -> door id
  std::vector<PassengerEvent> events;
  std::vector<int> final_occupancy;  // cell index -> passenger or -1
};

/// One boarding or deboarding simulation.
SimResult run(const SimConfig& config);

// ---------------------------------------------------------------------------
// Building blocks, exposed for testing.

enum class Move { N, E, S, W, Stay };
inline constexpr std::array<Coord, 4> kSteps{Coord{0, -1}, Coord{1, 0}, Coord{0, 1}, Coord{-1, 0}};
inline Coord apply(Coord p, Move m) {
  return m == Move::Stay ? p : Coord{p.x + kSteps[static_cast<int>(m)].x, p.y + kSteps[static_cast<int>(m)].y};
}

/// Shortest walking distances (through aisle cells) to one target cell.
class DistanceField {
public:
  static constexpr int kUnreachable = INT_MAX;
  DistanceField() = default;
  DistanceField(const CabinGrid& grid, Coord target);
  int at(const CabinGrid& grid, Coord c) const noexcept {
    return grid.in_grid(c) ? dist_[static_cast<std::size_t>(grid.index(c))] : kUnreachable;
  }
  Coord target() const noexcept { return target_; }

private:
  Coord target_;
  std::vector<int> dist_;
};

/// Next-step rule. A passenger only ever moves to a free cell that is one
/// step closer along the walking field, except when the cell straight ahead
/// along the corridor is taken: then a free N/S cell (a lane change, closer
/// or one step further in a parallel lane) may be used, provided
/// `probe.may_overtake(ahead)` allows it. Candidates rank by Manhattan
/// distance to the target, then N, E, S, W order; the cell just left ranks
/// last and is never used for an overtake. Horizontal moves away from the
/// target are never candidates.
///
/// Probe must provide: bool walkable(Coord), bool free(Coord),
/// bool came_from(Coord), bool may_overtake(Coord ahead).
template <typename Probe>
Move next_step(const CabinGrid& grid, const DistanceField& field, Coord p, Probe& probe) {
  const int here = field.at(grid, p);
  const Coord target = field.target();
  std::optional<Coord> ahead;
  bool ahead_free = false;
  for (int i = 0; i < 4; ++i) {
    const Coord n = apply(p, static_cast<Move>(i));
    if (n.y != p.y || !probe.walkable(n) || field.at(grid, n) != here - 1) continue;
    ahead = n;
    ahead_free = probe.free(n);
    if (ahead_free) break;
  }

  Move best = Move::Stay;
  long best_key = LONG_MAX;
  const auto consider = [&](Move m, long key) {
    key = key * 8 + static_cast<int>(m);
    if (key < best_key) {
      best_key = key;
      best = m;
    }
  };

  if (!ahead || ahead_free) {
    for (int i = 0; i < 4; ++i) {
      const Coord n = apply(p, static_cast<Move>(i));
      if (!probe.walkable(n) || field.at(grid, n) != here - 1 || !probe.free(n)) continue;
      const long stale = probe.came_from(n) ? 1 : 0;
      consider(static_cast<Move>(i), stale * 1'000'000 + manhattan_distance(n, target));
    }
    return best;
  }

  // Ahead is taken: look for a lane change.
  const int dx = ahead->x - p.x;
  for (const Move m : {Move::N, Move::S}) {
    const Coord n = apply(p, m);
    if (!probe.walkable(n) || !probe.free(n) || probe.came_from(n)) continue;
    const int fn = field.at(grid, n);
    if (fn == here - 1) {
      consider(m, manhattan_distance(n, target));
    } else if (fn == here + 1) {
      // Only into a parallel lane that carries on towards the target.
      const Coord on{n.x + dx, n.y};
      if (!probe.walkable(on) || field.at(grid, on) != fn - 1) continue;
      consider(m, 1'000'000L + manhattan_distance(n, target));
    }
  }
  if (best != Move::Stay && !probe.may_overtake(*ahead)) return Move::Stay;
  return best;
}

/// Cached overtaking permission for one obstruction event.
struct OvertakeCache {
  int blocker = -1;
  std::uint64_t blocker_epoch = 0;
  bool allowed = false;
};

/// Draws bernoulli(1 - IF) once per (blocker, blocker epoch); repeats the
/// cached answer while the blocker has not moved.
bool attempt_overtake(OvertakeCache& cache, int blocker, std::uint64_t blocker_epoch,
                      double interference_factor, Rng& rng);

/// Aisle choreography for a seat-interference maneuver in one lane.
struct ManeuverPlan {
  Coord entry;                    // row-entry cell
  Coord actor_hold;               // where the entering passenger waits
  std::vector<Coord> blocker_hold;  // hold cell per blocker, aisle-most blocker first
  std::vector<Coord> locked;      // every aisle cell reserved by the maneuver
};

/// Plans the maneuver for `blockers` seated between the aisle and the target
/// seat. `travel_dx` is the direction the entering passenger was walking in
/// (+1 or -1); it steps back to the lane cell it came from and blockers line
/// up on the other side, the aisle-most blocker
/// furthest out so that the blockers re-seat in reverse order. Returns
/// nullopt when the lane lacks room on either arrangement.
std::optional<ManeuverPlan> plan_seat_interference(const CabinGrid& grid, Coord entry, int blockers,
                                                   int travel_dx);

}  // namespace turnsim
