#include "turnsim/strategies.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>

#include "turnsim/errors.hpp"

namespace turnsim {

namespace {

template <typename It>
void shuffle(It first, It last, Rng& rng) {
  const auto n = static_cast<std::uint64_t>(last - first);
  for (std::uint64_t i = n; i > 1; --i) {
    const auto j = rng.below(i);
    std::iter_swap(first + static_cast<std::ptrdiff_t>(i - 1), first + static_cast<std::ptrdiff_t>(j));
  }
}

// Rows split into `zones` contiguous blocks of (nearly) equal row count;
// zone 0 is the front.
int zone_of(int row, int rows, int zones) {
  zones = std::clamp(zones, 1, std::max(rows, 1));
  const int base = rows / zones;
  const int extra = rows % zones;
  int start = 1;
  for (int z = 0; z < zones; ++z) {
    const int size = base + (z < extra ? 1 : 0);
    if (row < start + size) return z;
    start += size;
  }
  return zones - 1;
}

std::vector<int> order_by_band(std::span<const int> seats, Rng& rng, auto band_of) {
  std::map<int, std::vector<int>> bands;
  for (const int s : seats) bands[band_of(s)].push_back(s);
  std::vector<int> out;
  out.reserve(seats.size());
  for (auto& [band, members] : bands) {
    shuffle(members.begin(), members.end(), rng);
    out.insert(out.end(), members.begin(), members.end());
  }
  return out;
}

}  // namespace

std::optional<StrategyKind> parse_strategy(std::string_view name) {
  if (name == "random") return StrategyKind::Random;
  if (name == "outside-in") return StrategyKind::OutsideIn;
  if (name == "back-to-front") return StrategyKind::BackToFront;
  if (name == "rotating-zone") return StrategyKind::RotatingZone;
  if (name == "user") return StrategyKind::UserDefined;
  return std::nullopt;
}

std::string_view strategy_name(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::Random: return "random";
    case StrategyKind::OutsideIn: return "outside-in";
    case StrategyKind::BackToFront: return "back-to-front";
    case StrategyKind::RotatingZone: return "rotating-zone";
    case StrategyKind::UserDefined: return "user";
  }
  return "?";
}

int passenger_count(const CabinGrid& grid, double load_factor) {
  return static_cast<int>(std::lround(load_factor * static_cast<double>(grid.seats().size())));
}

std::vector<int> assign_seats(const CabinGrid& grid, double load_factor, Rng& rng) {
  if (!(load_factor >= 0.0 && load_factor <= 1.0)) throw ValidationError("load factor must lie in [0, 1]");
  const int n = passenger_count(grid, load_factor);
  std::vector<int> all(grid.seats().size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
  // Partial Fisher-Yates: the first n slots are a uniform n-subset.
  for (int i = 0; i < n; ++i) {
    const auto j = static_cast<std::size_t>(i) + rng.below(all.size() - static_cast<std::size_t>(i));
    std::swap(all[static_cast<std::size_t>(i)], all[j]);
  }
  all.resize(static_cast<std::size_t>(n));
  std::sort(all.begin(), all.end());
  return all;
}

std::vector<int> entry_order(const BoardingStrategy& strategy, const CabinGrid& grid,
                             std::span<const int> seats, Rng& rng) {
  if (seats.empty()) throw ValidationError("entry order needs at least one seat");
  const auto& refs = grid.seats();
  const int rows = grid.seat_row_count();
  switch (strategy.kind) {
    case StrategyKind::Random: {
      std::vector<int> out(seats.begin(), seats.end());
      shuffle(out.begin(), out.end(), rng);
      return out;
    }
    case StrategyKind::OutsideIn:
      // Deepest seats (window) first.
      return order_by_band(seats, rng, [&](int s) {
        return -static_cast<int>(refs[static_cast<std::size_t>(s)].path_from_aisle.size());
      });
    case StrategyKind::BackToFront:
      return order_by_band(seats, rng, [&](int s) {
        return -zone_of(refs[static_cast<std::size_t>(s)].row, rows, strategy.zone_count);
      });
    case StrategyKind::RotatingZone: {
      const int zones = std::clamp(strategy.zone_count, 1, std::max(rows, 1));
      // Rear, front, second-rear, second-front, ...
      std::vector<int> rank(static_cast<std::size_t>(zones));
      int lo = 0;
      int hi = zones - 1;
      for (int k = 0; lo <= hi; ++k) {
        if (k % 2 == 0) rank[static_cast<std::size_t>(hi--)] = k;
        else rank[static_cast<std::size_t>(lo++)] = k;
      }
      return order_by_band(seats, rng, [&](int s) {
        return rank[static_cast<std::size_t>(zone_of(refs[static_cast<std::size_t>(s)].row, rows, zones))];
      });
    }
    case StrategyKind::UserDefined: {
      std::vector<int> out;
      out.reserve(strategy.order.size());
      std::set<int> wanted(seats.begin(), seats.end());
      for (const auto& label : strategy.order) {
        const int idx = grid.seat_index(label);
        if (idx < 0) throw ValidationError("user order names unknown seat '" + label + "'");
        if (wanted.erase(idx) == 0) throw ValidationError("user order repeats or adds seat '" + label + "'");
        out.push_back(idx);
      }
      if (!wanted.empty()) throw ValidationError("user order omits " + std::to_string(wanted.size()) + " seats");
      return out;
    }
  }
  return {};
}

std::vector<std::string> load_user_order(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open order file '" + path + "'");
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) line.pop_back();
    std::size_t start = line.find_first_not_of(" \t");
    if (start == std::string::npos || line[start] == '#') continue;
    out.push_back(line.substr(start));
  }
  return out;
}

}  // namespace turnsim
