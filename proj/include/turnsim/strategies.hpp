#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "turnsim/cabin.hpp"
#include "turnsim/stochastic.hpp"

namespace turnsim {

enum class StrategyKind { Random, OutsideIn, BackToFront, RotatingZone, UserDefined };

struct BoardingStrategy {
  StrategyKind kind = StrategyKind::Random;
  int zone_count = 4;
  std::vector<std::string> order;  // seat labels, UserDefined only
};

std::optional<StrategyKind> parse_strategy(std::string_view name);
std::string_view strategy_name(StrategyKind kind);

/// round(LF * seat count).
int passenger_count(const CabinGrid& grid, double load_factor);

/// Uniformly random seat subset of size passenger_count(); seat indices ascending.
std::vector<int> assign_seats(const CabinGrid& grid, double load_factor, Rng& rng);

/// Boarding order over `seats` (indices into grid.seats()).
std::vector<int> entry_order(const BoardingStrategy& strategy, const CabinGrid& grid,
                             std::span<const int> seats, Rng& rng);

/// Reads a one-label-per-line order file ('#' comments and blanks skipped).
std::vector<std::string> load_user_order(const std::string& path);

}  // namespace turnsim
