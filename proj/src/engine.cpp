#include "turnsim/engine.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <queue>
#include <sstream>

#include "turnsim/errors.hpp"

namespace turnsim {

std::string_view state_name(PassengerState state) {
  switch (state) {
    case PassengerState::Queued: return "queued";
    case PassengerState::AtDoor: return "at_door";
    case PassengerState::Walking: return "walking";
    case PassengerState::Storing: return "storing";
    case PassengerState::InterferenceActor: return "interference_actor";
    case PassengerState::InterferenceDisplaced: return "interference_displaced";
    case PassengerState::Seated: return "seated";
    case PassengerState::Standing: return "standing";
    case PassengerState::Retrieving: return "retrieving";
    case PassengerState::Exited: return "exited";
  }
  return "?";
}

bool transition_allowed(PassengerState from, PassengerState to) {
  using S = PassengerState;
  switch (from) {
    case S::Queued: return to == S::AtDoor;
    case S::AtDoor: return to == S::Walking;
    case S::Walking: return to == S::Storing || to == S::Seated || to == S::Exited;
    case S::Storing: return to == S::Walking || to == S::InterferenceActor;
    case S::InterferenceActor: return to == S::Seated;
    case S::InterferenceDisplaced: return to == S::Seated;
    case S::Seated: return to == S::InterferenceDisplaced || to == S::Standing || to == S::Retrieving;
    case S::Standing: return to == S::Retrieving;
    case S::Retrieving: return to == S::Walking;
    case S::Exited: return false;
  }
  return false;
}

LuggageTime LuggageTime::preset(std::string_view name) {
  if (name != "A" && name != "B") throw ValidationError("unknown luggage preset '" + std::string(name) + "'");
  LuggageTime out;
  out.distribution = *weibull_preset(name);
  out.label = std::string(name);
  return out;
}

LuggageTime LuggageTime::fixed(double seconds) {
  if (!(seconds >= 0.0)) throw ValidationError("constant luggage time must be >= 0");
  LuggageTime out;
  out.constant = seconds;
  std::ostringstream label;
  label << seconds;
  out.label = label.str();
  return out;
}

double LuggageTime::draw(Rng& rng) const {
  return distribution ? sample_weibull(*distribution, rng) : constant;
}

void SimConfig::validate() const {
  if (!grid) throw ValidationError("no cabin layout given");
  if (!(load_factor >= 0.0 && load_factor <= 1.0)) throw ValidationError("load factor must lie in [0, 1]");
  if (!(interference_factor >= 0.0 && interference_factor <= 1.0)) {
    throw ValidationError("interference factor must lie in [0, 1]");
  }
  if (!(tick > 0.0)) throw ValidationError("tick must be positive");
  if (!(equipment_delay >= 0.0) || !(door_time >= 0.0) || !(seat_cell_time > 0.0)) {
    throw ValidationError("equipment delay and door time must be >= 0, seat cell time > 0");
  }
  if (exit_door_time && !(*exit_door_time >= 0.0)) throw ValidationError("exit door time must be >= 0");
  if (!(walk_reference > 0.0)) throw ValidationError("walk reference length must be positive");
  if (!walk.valid()) throw ValidationError("invalid walking-time distribution");
  if (luggage.distribution && !luggage.distribution->valid()) throw ValidationError("invalid luggage distribution");
  if (!luggage.distribution && !(luggage.constant >= 0.0)) throw ValidationError("luggage time must be >= 0");
  if (retrieval_factor && !(*retrieval_factor >= 0.0)) throw ValidationError("retrieval factor must be >= 0");
  if (max_ticks <= 0) throw ValidationError("tick ceiling must be positive");
  for (const int id : active_doors) {
    if (grid->door_index(id) < 0) throw ValidationError("layout has no door " + std::to_string(id));
  }
  if (seating) {
    std::vector<int> sorted = *seating;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw ValidationError("seating lists a seat twice");
    }
    for (const int s : sorted) {
      if (s < 0 || s >= static_cast<int>(grid->seats().size())) throw ValidationError("seating index out of range");
    }
    if (sorted.empty()) throw ValidationError("no passengers to simulate");
  } else if (passenger_count(*grid, load_factor) == 0) {
    throw ValidationError("no passengers to simulate (load factor too small)");
  }
}

DistanceField::DistanceField(const CabinGrid& grid, Coord target)
    : target_(target), dist_(static_cast<std::size_t>(grid.n_h() * grid.n_v()), kUnreachable) {
  std::queue<Coord> frontier;
  dist_[static_cast<std::size_t>(grid.index(target))] = 0;
  frontier.push(target);
  while (!frontier.empty()) {
    const Coord p = frontier.front();
    frontier.pop();
    const int d = dist_[static_cast<std::size_t>(grid.index(p))];
    for (const Coord s : kSteps) {
      const Coord n{p.x + s.x, p.y + s.y};
      if (!grid.in_grid(n)) continue;
      auto& slot = dist_[static_cast<std::size_t>(grid.index(n))];
      if (slot != kUnreachable) continue;
      const CellKind k = grid.kind(n);
      if (k == CellKind::Aisle) {
        slot = d + 1;
        frontier.push(n);
      } else if (k == CellKind::Door && grid.kind(p) == CellKind::Aisle) {
        slot = d + 1;  // doors are end points, never passed through
      }
    }
  }
}

bool attempt_overtake(OvertakeCache& cache, int blocker, std::uint64_t blocker_epoch, double interference_factor,
                      Rng& rng) {
  if (cache.blocker == blocker && cache.blocker_epoch == blocker_epoch) return cache.allowed;
  cache.blocker = blocker;
  cache.blocker_epoch = blocker_epoch;
  cache.allowed = bernoulli(1.0 - interference_factor, rng);
  return cache.allowed;
}

std::optional<ManeuverPlan> plan_seat_interference(const CabinGrid& grid, Coord entry, int blockers,
                                                   int travel_dx) {
  if (blockers < 1) return std::nullopt;
  const int dx = travel_dx >= 0 ? 1 : -1;
  const auto lane_ok = [&](Coord c) { return grid.in_grid(c) && grid.kind(c) == CellKind::Aisle; };
  // First try: actor steps back towards where it came from, blockers go ahead.
  for (const int side : {dx, -dx}) {
    ManeuverPlan plan;
    plan.entry = entry;
    plan.actor_hold = {entry.x - side, entry.y};
    if (!lane_ok(plan.actor_hold)) continue;
    bool ok = true;
    std::vector<Coord> ahead;
    for (int i = 1; i <= blockers && ok; ++i) {
      const Coord c{entry.x + side * i, entry.y};
      ok = lane_ok(c);
      ahead.push_back(c);
    }
    if (!ok) continue;
    // The aisle-most blocker leaves first and walks furthest.
    for (int j = 0; j < blockers; ++j) plan.blocker_hold.push_back(ahead[static_cast<std::size_t>(blockers - 1 - j)]);
    plan.locked.push_back(plan.actor_hold);
    plan.locked.push_back(entry);
    plan.locked.insert(plan.locked.end(), ahead.begin(), ahead.end());
    return plan;
  }
  return std::nullopt;
}

namespace {

constexpr double kManeuverPatience = 5.0;  // seconds an actor waits for free maneuver cells

struct Passenger {
  int seat = -1;
  int door = -1;  // index into grid.doors()
  PassengerState state = PassengerState::Queued;
  Coord pos{-1, -1};
  Coord prev{-1, -1};
  int dwell = 0;
  int h_ticks = 1;
  int v_ticks = 1;
  int lug_ticks = 0;
  int row_pos = -1;  // index into the seat path while inside the seat block
  int maneuver = -1;
  std::uint64_t epoch = 0;
  Rng rng;
  OvertakeCache cache;
  const DistanceField* field = nullptr;
  std::vector<Coord> route;
  std::size_t route_pos = 0;
  int phase = 0;
};

struct Maneuver {
  int actor = -1;
  std::optional<ManeuverPlan> plan;
  std::vector<int> blockers;  // aisle-most first
  int patience = 0;
  int waited = 0;
  bool started = false;
  bool virtual_mode = false;
  bool actor_in_row = false;
  int arrived = 0;
  int seated = 0;
  bool done = false;
};

int to_ticks(double seconds, double tick) {
  const double t = std::ceil(seconds / tick - 1e-9);
  return t <= 0.0 ? 0 : static_cast<int>(t);
}

class Simulation {
public:
  explicit Simulation(const SimConfig& config) : cfg_(config), grid_(*config.grid) {
    cfg_.validate();
    dt_ = cfg_.tick;
    occ_.assign(static_cast<std::size_t>(grid_.n_h() * grid_.n_v()), -1);
    lock_.assign(occ_.size(), -1);
    setup_doors();
    setup_passengers();
  }

  SimResult run() {
    result_.passengers = static_cast<int>(pax_.size());
    if (boarding()) feed_doors();
    if (cfg_.check_invariants) check();
    while (!finished()) {
      ++tick_;
      if (tick_ > cfg_.max_ticks) throw DeadlockError("no progress within the tick ceiling", snapshot());
      for (int i = 0; i < static_cast<int>(pax_.size()); ++i) update(i);
      if (boarding()) feed_doors();
      if (cfg_.check_invariants) check();
    }
    result_.ticks = tick_;
    if (boarding()) {
      result_.elapsed = static_cast<double>(finish_tick_) * dt_;
    } else {
      result_.elapsed = result_.last_exit - result_.first_exit;
    }
    result_.final_occupancy = occ_;
    for (const auto& p : pax_) {
      result_.seat_of.push_back(p.seat);
      result_.door_of.push_back(grid_.doors()[static_cast<std::size_t>(p.door)].id);
    }
    return std::move(result_);
  }

private:
  bool boarding() const { return cfg_.direction == Direction::Boarding; }

  std::size_t at(Coord c) const { return static_cast<std::size_t>(grid_.index(c)); }

  void setup_doors() {
    const auto& doors = grid_.doors();
    if (cfg_.active_doors.empty()) {
      for (std::size_t d = 0; d < doors.size(); ++d) active_.push_back(static_cast<int>(d));
    } else {
      for (const int id : cfg_.active_doors) {
        const int d = grid_.door_index(id);
        if (std::find(active_.begin(), active_.end(), d) == active_.end()) active_.push_back(d);
      }
    }
    std::sort(active_.begin(), active_.end(), [&](int a, int b) {
      const Coord ca = doors[static_cast<std::size_t>(a)].cell;
      const Coord cb = doors[static_cast<std::size_t>(b)].cell;
      return ca.x != cb.x ? ca.x < cb.x : doors[static_cast<std::size_t>(a)].id < doors[static_cast<std::size_t>(b)].id;
    });
    queues_.resize(doors.size());
    for (const int d : active_) {
      door_fields_.emplace(d, DistanceField(grid_, doors[static_cast<std::size_t>(d)].cell));
    }
  }

  int nearest_door(int seat) const {
    const Coord e = grid_.seats()[static_cast<std::size_t>(seat)].row_entry_cell;
    int best = -1;
    int best_d = INT_MAX;
    int best_id = INT_MAX;
    for (const int d : active_) {
      const auto& door = grid_.doors()[static_cast<std::size_t>(d)];
      const int dist = manhattan_distance(e, door.cell);
      if (dist < best_d || (dist == best_d && door.id < best_id)) {
        best = d;
        best_d = dist;
        best_id = door.id;
      }
    }
    return best;
  }

  void setup_passengers() {
    Rng run_rng = Rng::stream(cfg_.seed, 0xffff'ffff'ffff'fff1ULL);
    std::vector<int> seats = cfg_.seating ? *cfg_.seating : assign_seats(grid_, cfg_.load_factor, run_rng);
    std::sort(seats.begin(), seats.end());
    std::vector<int> order;
    if (boarding()) {
      order = entry_order(cfg_.strategy, grid_, seats, run_rng);
    } else {
      order = seats;
    }

    std::vector<int> door_of(order.size());
    if (cfg_.door_assignment == DoorAssignment::Nearest || active_.size() == 1) {
      for (std::size_t i = 0; i < order.size(); ++i) door_of[i] = nearest_door(order[i]);
    } else {
      std::vector<std::size_t> idx(order.size());
      for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
      std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return grid_.seats()[static_cast<std::size_t>(order[a])].row_entry_cell.x <
               grid_.seats()[static_cast<std::size_t>(order[b])].row_entry_cell.x;
      });
      const std::size_t n = idx.size();
      const std::size_t m = active_.size();
      for (std::size_t r = 0; r < n; ++r) door_of[idx[r]] = active_[r * m / n];
    }

    const double retrieval =
        cfg_.retrieval_factor ? *cfg_.retrieval_factor : (grid_.has_wide_aisle() ? 1.0 : 0.5);
    const double per_h = grid_.unit_h() / cfg_.walk_reference;
    const double per_v = grid_.unit_v() / cfg_.walk_reference;
    seat_ticks_ = std::max(1, to_ticks(cfg_.seat_cell_time, dt_));

    pax_.resize(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
      auto& p = pax_[i];
      p.seat = order[i];
      p.door = door_of[i];
      p.rng = Rng::stream(cfg_.seed, i);
      const double t_h = sample_weibull(cfg_.walk, p.rng);
      const double t_lug = cfg_.luggage.draw(p.rng);
      p.h_ticks = std::max(1, to_ticks(t_h * per_h, dt_));
      p.v_ticks = std::max(1, to_ticks(t_h * per_v, dt_));
      if (boarding()) {
        p.lug_ticks = to_ticks(t_lug, dt_);
        const Coord entry = seat_ref(p).row_entry_cell;
        auto it = entry_fields_.find(grid_.index(entry));
        if (it == entry_fields_.end()) it = entry_fields_.emplace(grid_.index(entry), DistanceField(grid_, entry)).first;
        p.field = &it->second;
        queues_[static_cast<std::size_t>(p.door)].push_back(static_cast<int>(i));
      } else {
        p.lug_ticks = std::max(1, to_ticks(t_lug * retrieval, dt_));
        p.field = &door_fields_.at(p.door);
        p.state = PassengerState::Seated;
        p.pos = seat_ref(p).cell;
        p.row_pos = static_cast<int>(seat_ref(p).path_from_aisle.size()) - 1;
        occ_[at(p.pos)] = static_cast<int>(i);
        log(static_cast<int>(i));
      }
    }
    remaining_ = static_cast<int>(pax_.size());
  }

  const SeatRef& seat_ref(const Passenger& p) const { return grid_.seats()[static_cast<std::size_t>(p.seat)]; }

  bool finished() const { return remaining_ == 0; }

  void log(int i) {
    if (!cfg_.record_events) return;
    const auto& p = pax_[static_cast<std::size_t>(i)];
    result_.events.push_back({tick_, i, p.state, p.pos});
  }

  void set_state(int i, PassengerState s) {
    auto& p = pax_[static_cast<std::size_t>(i)];
    if (cfg_.check_invariants && !transition_allowed(p.state, s)) {
      throw std::logic_error("illegal transition " + std::string(state_name(p.state)) + " -> " +
                             std::string(state_name(s)));
    }
    if (p.state == PassengerState::Seated && boarding()) ++remaining_;
    p.state = s;
    ++p.epoch;
    if (s == PassengerState::Seated && boarding()) {
      --remaining_;
      finish_tick_ = tick_;
    }
    log(i);
  }

  // Moves passenger i to an adjacent (or, for the virtual maneuver, any) free cell.
  void move_to(int i, Coord c, int dwell) {
    auto& p = pax_[static_cast<std::size_t>(i)];
    if (cfg_.check_invariants && occ_[at(c)] != -1) throw std::logic_error("cell exclusivity violated");
    if (p.pos.x >= 0) occ_[at(p.pos)] = -1;
    p.prev = p.pos;
    p.pos = c;
    occ_[at(c)] = i;
    p.dwell = dwell;
    ++p.epoch;
    log(i);
  }

  int walk_ticks(Passenger& p, Coord to) {
    if (cfg_.resample_walk) {
      const double t_h = sample_weibull(cfg_.walk, p.rng);
      const double per = (to.y == p.pos.y ? grid_.unit_h() : grid_.unit_v()) / cfg_.walk_reference;
      return std::max(1, to_ticks(t_h * per, dt_));
    }
    return to.y == p.pos.y ? p.h_ticks : p.v_ticks;
  }

  void feed_doors() {
    for (const int d : active_) {
      auto& q = queues_[static_cast<std::size_t>(d)];
      const Coord cell = grid_.doors()[static_cast<std::size_t>(d)].cell;
      if (q.empty() || occ_[at(cell)] != -1) continue;
      const int i = q.front();
      q.pop_front();
      auto& p = pax_[static_cast<std::size_t>(i)];
      p.pos = cell;
      occ_[at(cell)] = i;
      p.dwell = to_ticks(cfg_.door_time, dt_);
      set_state(i, PassengerState::AtDoor);
    }
  }

  struct Probe {
    Simulation& sim;
    int self;
    bool walkable(Coord c) const {
      if (!sim.grid_.in_grid(c)) return false;
      const CellKind k = sim.grid_.kind(c);
      if (k == CellKind::Aisle) return true;
      return k == CellKind::Door && c == sim.pax_[static_cast<std::size_t>(self)].field->target();
    }
    bool free(Coord c) const { return sim.cell_free(self, c); }
    bool came_from(Coord c) const { return sim.pax_[static_cast<std::size_t>(self)].prev == c; }
    bool may_overtake(Coord ahead) {
      const int o = sim.occ_[sim.at(ahead)];
      if (o < 0) return true;  // reserved by a maneuver, nobody in it yet
      const auto& blocker = sim.pax_[static_cast<std::size_t>(o)];
      switch (blocker.state) {
        case PassengerState::InterferenceActor:
        case PassengerState::InterferenceDisplaced: return true;
        case PassengerState::Storing:
        case PassengerState::Retrieving: {
          auto& me = sim.pax_[static_cast<std::size_t>(self)];
          return attempt_overtake(me.cache, o, blocker.epoch, sim.cfg_.interference_factor, me.rng);
        }
        default: return sim.lock_[sim.at(ahead)] >= 0;
      }
    }
  };

  bool cell_free(int self, Coord c) const {
    const std::size_t k = at(c);
    if (occ_[k] != -1) return false;
    const int owner = lock_[k];
    return owner < 0 || owner == pax_[static_cast<std::size_t>(self)].maneuver;
  }

  // One walking step along the field; returns true if the passenger moved.
  bool walk(int i) {
    auto& p = pax_[static_cast<std::size_t>(i)];
    Probe probe{*this, i};
    const Move m = next_step(grid_, *p.field, p.pos, probe);
    if (m == Move::Stay) return try_swap(i);
    const Coord to = apply(p.pos, m);
    if (cfg_.check_invariants && to.y == p.pos.y && p.field->at(grid_, to) >= p.field->at(grid_, p.pos)) {
      throw std::logic_error("backward move");
    }
    int dwell = walk_ticks(p, to);
    if (grid_.kind(to) == CellKind::Door) dwell = std::max(dwell, to_ticks(cfg_.exit_door_time.value_or(cfg_.door_time), dt_));
    move_to(i, to, dwell);
    return true;
  }

  // Two walkers that each stand on the other's next cell trade places;
  // otherwise they would wait for each other forever.
  bool try_swap(int i) {
    auto& p = pax_[static_cast<std::size_t>(i)];
    const int here = p.field->at(grid_, p.pos);
    for (const Coord s : kSteps) {
      const Coord n{p.pos.x + s.x, p.pos.y + s.y};
      if (!grid_.in_grid(n) || p.field->at(grid_, n) != here - 1 || lock_[at(n)] >= 0) continue;
      const int j = occ_[at(n)];
      if (j < 0) continue;
      auto& q = pax_[static_cast<std::size_t>(j)];
      if (q.state != PassengerState::Walking || q.row_pos >= 0 || q.dwell > 0) continue;
      if (q.pos == q.field->target()) continue;
      if (q.field->at(grid_, p.pos) != q.field->at(grid_, q.pos) - 1) continue;
      const Coord mine = p.pos;
      const int dwell_p = walk_ticks(p, n);
      const int dwell_q = walk_ticks(q, mine);
      occ_[at(mine)] = -1;
      occ_[at(n)] = -1;
      p.pos = {-1, -1};
      q.pos = {-1, -1};
      move_to(i, n, dwell_p);
      move_to(j, mine, dwell_q);
      p.prev = mine;
      q.prev = n;
      return true;
    }
    return false;
  }

  void update(int i) {
    auto& p = pax_[static_cast<std::size_t>(i)];
    using S = PassengerState;
    if (p.state == S::Queued || p.state == S::Exited) return;
    if (p.state == S::Seated && boarding()) return;
    if (p.dwell > 0 && --p.dwell > 0) return;
    if (boarding()) {
      update_boarding(i);
    } else {
      update_deboarding(i);
    }
  }

  void update_boarding(int i) {
    auto& p = pax_[static_cast<std::size_t>(i)];
    using S = PassengerState;
    switch (p.state) {
      case S::AtDoor:
        if (walk(i)) set_state(i, S::Walking);
        break;
      case S::Walking:
        if (p.row_pos >= 0) {
          step_into_row(i);
        } else if (p.pos == seat_ref(p).row_entry_cell) {
          set_state(i, S::Storing);
          p.dwell = p.lug_ticks;
          if (p.dwell == 0) storing_done(i);
        } else {
          walk(i);
        }
        break;
      case S::Storing: storing_done(i); break;
      case S::InterferenceActor: actor_step(i); break;
      case S::InterferenceDisplaced: blocker_step(i); break;
      default: break;
    }
  }

  // Walking inside the seat block towards the own seat.
  void step_into_row(int i) {
    auto& p = pax_[static_cast<std::size_t>(i)];
    const auto& path = seat_ref(p).path_from_aisle;
    if (p.row_pos == static_cast<int>(path.size()) - 1) {
      set_state(i, PassengerState::Seated);
      return;
    }
    const Coord next = path[static_cast<std::size_t>(p.row_pos + 1)];
    if (occ_[at(next)] != -1) return;
    ++p.row_pos;
    move_to(i, next, seat_ticks_);
  }

  void storing_done(int i) {
    auto& p = pax_[static_cast<std::size_t>(i)];
    const auto& path = seat_ref(p).path_from_aisle;
    std::vector<int> blockers;
    for (std::size_t k = 0; k + 1 < path.size(); ++k) {
      const int o = occ_[at(path[k])];
      if (o < 0) continue;
      if (pax_[static_cast<std::size_t>(o)].state != PassengerState::Seated) return;  // someone still settling in
      blockers.push_back(o);
    }
    if (occ_[at(path.back())] != -1) return;
    if (blockers.empty()) {
      set_state(i, PassengerState::Walking);
      p.row_pos = 0;
      move_to(i, path.front(), seat_ticks_);
      return;
    }
    Maneuver& m = maneuvers_[i];
    m = Maneuver{};
    m.actor = i;
    m.blockers = std::move(blockers);
    int dx = 0;
    if (p.prev.y == p.pos.y && p.prev.x != p.pos.x) dx = p.pos.x > p.prev.x ? 1 : -1;
    if (dx == 0) dx = grid_.doors()[static_cast<std::size_t>(p.door)].cell.x <= p.pos.x ? 1 : -1;
    m.plan = plan_seat_interference(grid_, p.pos, static_cast<int>(m.blockers.size()), dx);
    m.patience = grid_.entry_is_wide(static_cast<std::size_t>(p.seat)) ? to_ticks(kManeuverPatience, dt_) : 0;
    p.maneuver = i;
    ++result_.maneuvers;
    set_state(i, PassengerState::InterferenceActor);
    actor_step(i);
  }

  void release_locks(int owner, const std::vector<Coord>& cells) {
    for (const Coord c : cells) {
      if (lock_[at(c)] == owner) lock_[at(c)] = -1;
    }
  }

  // Follows the scripted route one cell at a time; true once at its end.
  bool follow_route(int i) {
    auto& p = pax_[static_cast<std::size_t>(i)];
    if (p.route_pos >= p.route.size()) return true;
    const Coord next = p.route[p.route_pos];
    if (occ_[at(next)] != -1) return false;
    const int dwell = grid_.kind(next) == CellKind::Seat ? seat_ticks_ : walk_ticks(p, next);
    move_to(i, next, dwell);
    ++p.route_pos;
    return false;
  }

  void actor_step(int i) {
    auto& p = pax_[static_cast<std::size_t>(i)];
    auto& m = maneuvers_.at(i);
    const auto& path = seat_ref(p).path_from_aisle;
    if (m.virtual_mode) {
      // Blockers stand aside in place; the actor is seated once the time is up.
      occ_[at(p.pos)] = -1;
      p.pos = path.back();
      occ_[at(p.pos)] = i;
      p.row_pos = static_cast<int>(path.size()) - 1;
      finish_maneuver(i);
      return;
    }
    if (!m.started) {
      if (m.plan) {
        bool all = true;
        for (const Coord c : m.plan->locked) {
          auto& owner = lock_[at(c)];
          if (owner == i) continue;
          if (owner < 0 && (occ_[at(c)] == -1 || occ_[at(c)] == i)) {
            owner = i;
          } else {
            all = false;
          }
        }
        if (all) {
          start_explicit(i);
          return;
        }
      }
      if (m.waited >= m.patience) {
        if (m.plan) release_locks(i, m.plan->locked);
        m.virtual_mode = true;
        ++result_.virtual_maneuvers;
        // Each blocker steps out and back in: its seat cells count once.
        int cells = static_cast<int>(path.size());
        for (const int b : m.blockers) cells += (pax_[static_cast<std::size_t>(b)].row_pos + 1);
        p.dwell = std::max(1, to_ticks(cfg_.seat_cell_time * cells, dt_));
        return;
      }
      ++m.waited;
      return;
    }
    if (p.phase == 0) {
      if (follow_route(i) && p.route_pos >= p.route.size()) {
        p.phase = 1;
      } else {
        return;
      }
    }
    if (p.phase == 1) {
      if (m.arrived < static_cast<int>(m.blockers.size())) return;
      p.route.assign(1, m.plan->entry);
      p.route.insert(p.route.end(), path.begin(), path.end());
      p.route_pos = 0;
      p.phase = 2;
    }
    if (p.phase == 2) {
      if (p.route_pos >= p.route.size()) {
        p.row_pos = static_cast<int>(path.size()) - 1;
        finish_participant(i, m);
        return;
      }
      follow_route(i);
      if (p.route_pos >= 2) m.actor_in_row = true;
    }
  }

  void start_explicit(int i) {
    auto& m = maneuvers_.at(i);
    auto& actor = pax_[static_cast<std::size_t>(i)];
    m.started = true;
    const auto& path = seat_ref(actor).path_from_aisle;
    const Coord entry = m.plan->entry;
    for (std::size_t j = 0; j < m.blockers.size(); ++j) {
      const int b = m.blockers[j];
      auto& bp = pax_[static_cast<std::size_t>(b)];
      bp.maneuver = i;
      bp.route.clear();
      for (int k = bp.row_pos - 1; k >= 0; --k) bp.route.push_back(path[static_cast<std::size_t>(k)]);
      bp.route.push_back(entry);
      const Coord hold = m.plan->blocker_hold[j];
      const int step = hold.x > entry.x ? 1 : -1;
      for (int x = entry.x + step; x != hold.x + step; x += step) bp.route.push_back({x, entry.y});
      bp.route_pos = 0;
      bp.phase = 0;
      bp.dwell = 0;
      set_state(b, PassengerState::InterferenceDisplaced);
    }
    actor.route.assign(1, m.plan->actor_hold);
    actor.route_pos = 0;
    actor.phase = 0;
    follow_route(i);
  }

  void blocker_step(int b) {
    auto& p = pax_[static_cast<std::size_t>(b)];
    auto& m = maneuvers_.at(p.maneuver);
    if (p.phase == 0) {
      if (!follow_route(b) || p.route_pos < p.route.size()) return;
      p.phase = 1;
      ++m.arrived;
    }
    if (p.phase == 1) {
      if (!m.actor_in_row) return;
      const auto& own_path = seat_ref(p).path_from_aisle;
      std::vector<Coord> back;
      const Coord entry = m.plan->entry;
      const int step = entry.x > p.pos.x ? 1 : -1;
      for (int x = p.pos.x + step; x != entry.x; x += step) back.push_back({x, entry.y});
      back.push_back(entry);
      back.insert(back.end(), own_path.begin(), own_path.end());
      p.route = std::move(back);
      p.route_pos = 0;
      p.phase = 2;
    }
    if (p.route_pos >= p.route.size()) {
      finish_participant(b, m);
      return;
    }
    follow_route(b);
  }

  void finish_participant(int i, Maneuver& m) {
    auto& p = pax_[static_cast<std::size_t>(i)];
    p.route.clear();
    p.route_pos = 0;
    p.phase = 0;
    p.maneuver = -1;
    set_state(i, PassengerState::Seated);
    if (++m.seated == static_cast<int>(m.blockers.size()) + 1) {
      release_locks(m.actor, m.plan->locked);
      maneuvers_.erase(m.actor);
    }
  }

  void finish_maneuver(int i) {
    auto& p = pax_[static_cast<std::size_t>(i)];
    p.maneuver = -1;
    ++p.epoch;
    set_state(i, PassengerState::Seated);
    maneuvers_.erase(i);
  }

  void update_deboarding(int i) {
    auto& p = pax_[static_cast<std::size_t>(i)];
    using S = PassengerState;
    switch (p.state) {
      case S::Seated:
      case S::Standing: {
        const auto& path = seat_ref(p).path_from_aisle;
        if (p.row_pos == 0) {
          const Coord entry = seat_ref(p).row_entry_cell;
          if (!cell_free(i, entry)) return;
          p.row_pos = -1;
          move_to(i, entry, walk_ticks(p, entry) + p.lug_ticks);
          set_state(i, S::Retrieving);
        } else {
          const Coord next = path[static_cast<std::size_t>(p.row_pos - 1)];
          if (occ_[at(next)] != -1) return;
          --p.row_pos;
          if (p.state == S::Seated) set_state(i, S::Standing);
          move_to(i, next, seat_ticks_);
        }
        break;
      }
      case S::Retrieving:
        set_state(i, S::Walking);
        walk(i);
        break;
      case S::Walking:
        if (p.pos == p.field->target()) {
          if (static_cast<double>(tick_) * dt_ + 1e-9 < cfg_.equipment_delay) return;
          occ_[at(p.pos)] = -1;
          set_state(i, S::Exited);
          const double t = static_cast<double>(tick_) * dt_;
          if (remaining_ == static_cast<int>(pax_.size())) result_.first_exit = t;
          result_.last_exit = t;
          --remaining_;
        } else {
          walk(i);
        }
        break;
      default: break;
    }
  }

  std::string snapshot() const {
    std::ostringstream out;
    out << "tick " << tick_ << ", " << remaining_ << " passengers unfinished\n";
    for (std::size_t i = 0; i < pax_.size(); ++i) {
      const auto& p = pax_[i];
      if (p.state == PassengerState::Exited || (boarding() && p.state == PassengerState::Seated)) continue;
      out << i << ' ' << state_name(p.state) << " (" << p.pos.x << ',' << p.pos.y << ") seat "
          << seat_ref(p).id << '\n';
    }
    return out.str();
  }

  void check() const {
    std::vector<int> seen(occ_.size(), -1);
    int queued = 0, inside = 0, done = 0;
    for (std::size_t i = 0; i < pax_.size(); ++i) {
      const auto& p = pax_[i];
      switch (p.state) {
        case PassengerState::Queued: ++queued; continue;
        case PassengerState::Exited: ++done; continue;
        case PassengerState::Seated: ++done; break;
        default: ++inside;
      }
      const std::size_t k = at(p.pos);
      if (seen[k] != -1 || occ_[k] != static_cast<int>(i)) throw std::logic_error("cell exclusivity violated");
      seen[k] = static_cast<int>(i);
    }
    for (std::size_t k = 0; k < occ_.size(); ++k) {
      if (occ_[k] != seen[k]) throw std::logic_error("occupancy map out of sync");
    }
    if (queued + inside + done != static_cast<int>(pax_.size())) throw std::logic_error("passenger count not conserved");
  }

  SimConfig cfg_;
  const CabinGrid& grid_;
  double dt_ = 0.1;
  int seat_ticks_ = 18;
  std::int64_t tick_ = 0;
  std::int64_t finish_tick_ = 0;
  int remaining_ = 0;
  std::vector<int> occ_;
  std::vector<int> lock_;
  std::vector<int> active_;
  std::vector<std::deque<int>> queues_;
  std::map<int, DistanceField> door_fields_;
  std::map<int, DistanceField> entry_fields_;
  std::vector<Passenger> pax_;
  std::map<int, Maneuver> maneuvers_;
  SimResult result_;
};

}  // namespace

SimResult run(const SimConfig& config) {
  if (!config.grid) throw ValidationError("no cabin layout given");
  Simulation sim(config);
  return sim.run();
}

}  // namespace turnsim
