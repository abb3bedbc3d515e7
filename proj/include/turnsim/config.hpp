#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "turnsim/engine.hpp"

namespace turnsim {

/// `key = value` lines; '#' starts a comment, blank lines are skipped.
class KeyValues {
public:
  struct Entry {
    std::string key;
    std::string value;
    int line = 0;
    bool used = false;
  };

  static KeyValues parse(std::string_view text);
  static KeyValues load(const std::string& path);

  bool has(std::string_view key) const;
  std::optional<std::string> text(std::string_view key) const;
  std::optional<double> number(std::string_view key) const;
  std::optional<long long> integer(std::string_view key) const;
  std::optional<bool> flag(std::string_view key) const;
  /// Comma-separated numbers.
  std::optional<std::vector<double>> numbers(std::string_view key) const;

  /// Throws ParseError naming the first key nobody asked for.
  void reject_unknown() const;
  const std::vector<Entry>& entries() const noexcept { return entries_; }

private:
  const Entry* find(std::string_view key) const;
  mutable std::vector<Entry> entries_;
};

/// Door list such as "1L,3L" or "1,3"; the side letter is ignored.
std::vector<int> parse_door_list(std::string_view text);

/// Run config: layout, lf, if, doors, preset | tlug, strategy, zones, order,
/// seed, direction, runs, tick, equipment_delay. Relative layout and order
/// paths resolve against `base_dir`.
struct RunConfig {
  SimConfig sim;
  std::string layout_path;
  int runs = 200;
};

RunConfig parse_run_config(std::string_view text, const std::string& base_dir = ".");
RunConfig load_run_config(const std::string& path);

Direction parse_direction(std::string_view text);

}  // namespace turnsim
