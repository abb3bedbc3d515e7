#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace turnsim {

// Cell coordinates are (column, row) with the origin at the top-left
// character of the layout file. Columns run along the fuselage (the
// "horizontal" axis), rows across it.
struct Coord {
  int x = 0;
  int y = 0;

  friend bool operator==(const Coord&, const Coord&) = default;
};

enum class CellKind : std::uint8_t { Wall, Seat, Aisle, Door };

/// L1 distance between two cells.
constexpr int manhattan_distance(Coord p, Coord q) noexcept {
  const int dx = p.x > q.x ? p.x - q.x : q.x - p.x;
  const int dy = p.y > q.y ? p.y - q.y : q.y - p.y;
  return dx + dy;
}

struct SeatRef {
  std::string id;        // e.g. "12C"; opaque
  Coord cell;
  Coord row_entry_cell;  // aisle cell where luggage is stored/retrieved
  // Seat cells from the one next to row_entry_cell up to and including `cell`.
  std::vector<Coord> path_from_aisle;
  int row = 0;           // 1-based seat column index, front to back
};

struct DoorRef {
  int id = 0;  // 1..9 as written in the layout
  Coord cell;
  bool active = true;
};

/// Immutable discretised cabin.
class CabinGrid {
public:
  CabinGrid() = default;

  int n_h() const noexcept { return n_h_; }
  int n_v() const noexcept { return n_v_; }
  double length_h() const noexcept { return l_h_; }
  double length_v() const noexcept { return l_v_; }
  double unit_h() const noexcept { return l_h_ / n_h_; }
  double unit_v() const noexcept { return l_v_ / n_v_; }

  bool in_grid(Coord c) const noexcept {
    return c.x >= 0 && c.y >= 0 && c.x < n_h_ && c.y < n_v_;
  }
  int index(Coord c) const noexcept { return c.y * n_h_ + c.x; }
  Coord coord(int index) const noexcept { return {index % n_h_, index / n_h_}; }
  CellKind kind(Coord c) const noexcept { return cells_[static_cast<std::size_t>(index(c))]; }

  const std::vector<SeatRef>& seats() const noexcept { return seats_; }
  const std::vector<DoorRef>& doors() const noexcept { return doors_; }
  /// Index into doors() for a door id, or -1.
  int door_index(int id) const noexcept;
  /// Index into seats() for a seat label, or -1.
  int seat_index(std::string_view label) const noexcept;
  int seat_row_count() const noexcept { return seat_rows_; }

  /// True when some row-entry cell has another aisle cell directly across
  /// it, i.e. the aisle is at least two cells wide there.
  bool has_wide_aisle() const noexcept { return wide_aisle_; }
  /// Per-seat: the row-entry cell of this seat sits in a multi-lane aisle.
  bool entry_is_wide(std::size_t seat) const noexcept { return entry_wide_[seat] != 0; }

  friend CabinGrid parse_layout(std::string_view text);

private:
  int n_h_ = 0;
  int n_v_ = 0;
  double l_h_ = 0.0;
  double l_v_ = 0.0;
  std::vector<CellKind> cells_;
  std::vector<SeatRef> seats_;
  std::vector<DoorRef> doors_;
  std::vector<std::uint8_t> entry_wide_;
  int seat_rows_ = 0;
  bool wide_aisle_ = false;
};

/// Parses the layout format:
///
///     # comment lines (only before the header)
///     L_H=<metres> L_V=<metres>
///     <n_V grid lines of n_H characters>
///
/// '#' wall, 'S' seat, '.' aisle, '1'..'9' door. Every line after the header
/// is a grid line; trailing blank lines are ignored.
CabinGrid parse_layout(std::string_view text);
CabinGrid load_layout(const std::string& path);
std::string serialize_layout(const CabinGrid& grid);

/// Horizontal over vertical cell unit length.
double gamma(const CabinGrid& grid) noexcept;

char cell_char(CellKind kind) noexcept;

}  // namespace turnsim
