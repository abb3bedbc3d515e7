#include "turnsim/cabin.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <queue>
#include <sstream>

#include "turnsim/errors.hpp"

namespace turnsim {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

double parse_length(std::string_view value, int line, std::string_view key) {
  double out = 0.0;
  const auto* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc{} || ptr != end || !(out > 0.0)) {
    throw ParseError(line, std::string(key) + " must be a positive decimal, got '" + std::string(value) + "'");
  }
  return out;
}

std::string seat_label(int row, int letter_index) {
  std::string label = std::to_string(row);
  if (letter_index < 26) {
    label.push_back(static_cast<char>('A' + letter_index));
  } else {
    label += "_" + std::to_string(letter_index);
  }
  return label;
}

}  // namespace

int CabinGrid::door_index(int id) const noexcept {
  for (std::size_t i = 0; i < doors_.size(); ++i) {
    if (doors_[i].id == id) return static_cast<int>(i);
  }
  return -1;
}

int CabinGrid::seat_index(std::string_view label) const noexcept {
  for (std::size_t i = 0; i < seats_.size(); ++i) {
    if (seats_[i].id == label) return static_cast<int>(i);
  }
  return -1;
}

char cell_char(CellKind kind) noexcept {
  switch (kind) {
    case CellKind::Wall: return '#';
    case CellKind::Seat: return 'S';
    case CellKind::Aisle: return '.';
    case CellKind::Door: return 'D';
  }
  return '?';
}

CabinGrid parse_layout(std::string_view text) {
  std::vector<std::pair<int, std::string_view>> lines;
  {
    int number = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const std::size_t nl = text.find('\n', pos);
      std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      lines.emplace_back(++number, line);
      if (nl == std::string_view::npos) break;
      pos = nl + 1;
    }
  }

  CabinGrid grid;
  std::size_t i = 0;
  for (; i < lines.size(); ++i) {
    const auto line = trim(lines[i].second);
    if (line.empty() || line.front() == '#') continue;
    break;
  }
  if (i == lines.size()) throw ParseError(static_cast<int>(lines.size()), "missing L_H/L_V header");

  {
    const int number = lines[i].first;
    std::string_view header = trim(lines[i].second);
    bool have_h = false;
    bool have_v = false;
    while (!header.empty()) {
      const auto sep = header.find_first_of(" \t");
      const auto token = header.substr(0, sep);
      header = sep == std::string_view::npos ? std::string_view{} : trim(header.substr(sep));
      const auto eq = token.find('=');
      if (eq == std::string_view::npos) throw ParseError(number, "malformed header token '" + std::string(token) + "'");
      const auto key = token.substr(0, eq);
      const auto value = token.substr(eq + 1);
      if (key == "L_H" && !have_h) {
        grid.l_h_ = parse_length(value, number, key);
        have_h = true;
      } else if (key == "L_V" && !have_v) {
        grid.l_v_ = parse_length(value, number, key);
        have_v = true;
      } else {
        throw ParseError(number, "unexpected header key '" + std::string(key) + "'");
      }
    }
    if (!have_h || !have_v) throw ParseError(number, "header needs both L_H and L_V");
    ++i;
  }

  std::size_t last = lines.size();
  while (last > i && trim(lines[last - 1].second).empty()) --last;
  if (last == i) throw ParseError(lines.back().first, "no grid lines after header");

  grid.n_h_ = static_cast<int>(lines[i].second.size());
  grid.n_v_ = static_cast<int>(last - i);
  grid.cells_.reserve(static_cast<std::size_t>(grid.n_h_) * grid.n_v_);
  std::map<int, Coord> door_cells;
  for (std::size_t r = i; r < last; ++r) {
    const auto [number, line] = lines[r];
    if (static_cast<int>(line.size()) != grid.n_h_) {
      throw ParseError(number, "expected " + std::to_string(grid.n_h_) + " cells, got " + std::to_string(line.size()));
    }
    const int y = static_cast<int>(r - i);
    for (int x = 0; x < grid.n_h_; ++x) {
      const char c = line[static_cast<std::size_t>(x)];
      switch (c) {
        case '#': grid.cells_.push_back(CellKind::Wall); break;
        case 'S':
          grid.cells_.push_back(CellKind::Seat);
          grid.seats_.emplace_back();
          grid.seats_.back().cell = {x, y};
          break;
        case '.': grid.cells_.push_back(CellKind::Aisle); break;
        default:
          if (c >= '1' && c <= '9') {
            const int id = c - '0';
            if (door_cells.contains(id)) throw ParseError(number, "door " + std::string(1, c) + " appears twice");
            door_cells[id] = {x, y};
            grid.cells_.push_back(CellKind::Door);
            grid.doors_.push_back(DoorRef{.id = id, .cell = {x, y}, .active = true});
          } else {
            throw ParseError(number, "unknown cell character '" + std::string(1, c) + "'");
          }
      }
    }
  }
  if (grid.seats_.empty()) throw ValidationError("layout has no seats");
  if (grid.doors_.empty()) throw ValidationError("layout has no doors");

  // Seat labels: row = rank of the seat column, letter = order down the column.
  std::vector<int> columns;
  for (const auto& s : grid.seats_) columns.push_back(s.cell.x);
  std::sort(columns.begin(), columns.end());
  columns.erase(std::unique(columns.begin(), columns.end()), columns.end());
  grid.seat_rows_ = static_cast<int>(columns.size());
  std::map<int, int> letters_used;
  std::vector<std::size_t> by_column(grid.seats_.size());
  for (std::size_t k = 0; k < by_column.size(); ++k) by_column[k] = k;
  std::stable_sort(by_column.begin(), by_column.end(), [&](std::size_t a, std::size_t b) {
    return grid.seats_[a].cell.x < grid.seats_[b].cell.x;
  });
  for (const std::size_t k : by_column) {
    auto& seat = grid.seats_[k];
    seat.row = static_cast<int>(std::lower_bound(columns.begin(), columns.end(), seat.cell.x) - columns.begin()) + 1;
    seat.id = seat_label(seat.row, letters_used[seat.cell.x]++);
  }

  // Row entry: nearest aisle cell at either end of the vertical seat run,
  // falling back to a horizontally adjacent aisle cell.
  const auto is = [&](Coord c, CellKind k) { return grid.in_grid(c) && grid.kind(c) == k; };
  grid.entry_wide_.assign(grid.seats_.size(), 0);
  for (std::size_t k = 0; k < grid.seats_.size(); ++k) {
    auto& seat = grid.seats_[k];
    const Coord c = seat.cell;
    int top = c.y;
    while (is({c.x, top - 1}, CellKind::Seat)) --top;
    int bottom = c.y;
    while (is({c.x, bottom + 1}, CellKind::Seat)) ++bottom;
    const bool up = is({c.x, top - 1}, CellKind::Aisle);
    const bool down = is({c.x, bottom + 1}, CellKind::Aisle);
    if (up && (!down || c.y - top <= bottom - c.y)) {
      seat.row_entry_cell = {c.x, top - 1};
      for (int y = top; y <= c.y; ++y) seat.path_from_aisle.push_back({c.x, y});
    } else if (down) {
      seat.row_entry_cell = {c.x, bottom + 1};
      for (int y = bottom; y >= c.y; --y) seat.path_from_aisle.push_back({c.x, y});
    } else if (is({c.x - 1, c.y}, CellKind::Aisle)) {
      seat.row_entry_cell = {c.x - 1, c.y};
      seat.path_from_aisle.push_back(c);
    } else if (is({c.x + 1, c.y}, CellKind::Aisle)) {
      seat.row_entry_cell = {c.x + 1, c.y};
      seat.path_from_aisle.push_back(c);
    } else {
      throw ConnectivityError(seat.id, "seat " + seat.id + " has no adjacent aisle cell");
    }
    const Coord e = seat.row_entry_cell;
    const bool vertical_entry = e.x == c.x;
    if (vertical_entry) {
      // Across the aisle from the seat block, i.e. continuing in the entry direction.
      const int dir = e.y < c.y ? -1 : 1;
      grid.entry_wide_[k] = is({e.x, e.y + dir}, CellKind::Aisle) ? 1 : 0;
    }
    if (grid.entry_wide_[k] != 0) grid.wide_aisle_ = true;
  }

  // Every seat must be reachable from every door through aisle cells.
  for (const auto& door : grid.doors_) {
    std::vector<std::uint8_t> seen(grid.cells_.size(), 0);
    std::queue<Coord> frontier;
    frontier.push(door.cell);
    seen[static_cast<std::size_t>(grid.index(door.cell))] = 1;
    while (!frontier.empty()) {
      const Coord p = frontier.front();
      frontier.pop();
      for (const Coord d : {Coord{0, -1}, Coord{1, 0}, Coord{0, 1}, Coord{-1, 0}}) {
        const Coord n{p.x + d.x, p.y + d.y};
        if (!is(n, CellKind::Aisle)) continue;
        auto& mark = seen[static_cast<std::size_t>(grid.index(n))];
        if (mark == 0) {
          mark = 1;
          frontier.push(n);
        }
      }
    }
    for (const auto& seat : grid.seats_) {
      if (seen[static_cast<std::size_t>(grid.index(seat.row_entry_cell))] == 0) {
        throw ConnectivityError(seat.id, "seat " + seat.id + " is unreachable from door " + std::to_string(door.id));
      }
    }
  }
  return grid;
}

CabinGrid load_layout(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open layout file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_layout(buffer.str());
}

std::string serialize_layout(const CabinGrid& grid) {
  const auto number = [](double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
  };
  std::string out = "L_H=" + number(grid.length_h()) + " L_V=" + number(grid.length_v()) + "\n";
  for (int y = 0; y < grid.n_v(); ++y) {
    for (int x = 0; x < grid.n_h(); ++x) {
      const Coord c{x, y};
      if (grid.kind(c) == CellKind::Door) {
        for (const auto& d : grid.doors()) {
          if (d.cell == c) out.push_back(static_cast<char>('0' + d.id));
        }
      } else {
        out.push_back(cell_char(grid.kind(c)));
      }
    }
    out.push_back('\n');
  }
  return out;
}

double gamma(const CabinGrid& grid) noexcept { return grid.unit_h() / grid.unit_v(); }

}  // namespace turnsim
