#include "turnsim/config.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "turnsim/errors.hpp"
#include "turnsim/strategies.hpp"

namespace turnsim {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::optional<double> to_double(std::string_view s) {
  s = trim(s);
  double v = 0.0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (s.empty() || ec != std::errc{} || ptr != end) return std::nullopt;
  return v;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string resolve(const std::string& base_dir, const std::string& path) {
  const std::filesystem::path p(path);
  return p.is_absolute() ? path : (std::filesystem::path(base_dir) / p).lexically_normal().string();
}

}  // namespace

KeyValues KeyValues::parse(std::string_view text) {
  KeyValues kv;
  int number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    ++number;
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(number, "expected 'key = value'");
    const auto key = trim(line.substr(0, eq));
    if (key.empty()) throw ParseError(number, "empty key");
    if (kv.find(key)) throw ParseError(number, "duplicate key '" + std::string(key) + "'");
    kv.entries_.push_back({std::string(key), std::string(trim(line.substr(eq + 1))), number, false});
  }
  return kv;
}

KeyValues KeyValues::load(const std::string& path) { return parse(slurp(path)); }

const KeyValues::Entry* KeyValues::find(std::string_view key) const {
  for (auto& e : entries_) {
    if (e.key == key) {
      e.used = true;
      return &e;
    }
  }
  return nullptr;
}

bool KeyValues::has(std::string_view key) const { return find(key) != nullptr; }

std::optional<std::string> KeyValues::text(std::string_view key) const {
  const auto* e = find(key);
  if (!e) return std::nullopt;
  return e->value;
}

std::optional<double> KeyValues::number(std::string_view key) const {
  const auto* e = find(key);
  if (!e) return std::nullopt;
  const auto v = to_double(e->value);
  if (!v) throw ParseError(e->line, e->key + " must be a number, got '" + e->value + "'");
  return v;
}

std::optional<long long> KeyValues::integer(std::string_view key) const {
  const auto* e = find(key);
  if (!e) return std::nullopt;
  long long v = 0;
  const auto* end = e->value.data() + e->value.size();
  auto [ptr, ec] = std::from_chars(e->value.data(), end, v);
  if (e->value.empty() || ec != std::errc{} || ptr != end) {
    throw ParseError(e->line, e->key + " must be an integer, got '" + e->value + "'");
  }
  return v;
}

std::optional<bool> KeyValues::flag(std::string_view key) const {
  const auto* e = find(key);
  if (!e) return std::nullopt;
  if (e->value == "yes" || e->value == "true" || e->value == "1") return true;
  if (e->value == "no" || e->value == "false" || e->value == "0") return false;
  throw ParseError(e->line, e->key + " must be yes or no, got '" + e->value + "'");
}

std::optional<std::vector<double>> KeyValues::numbers(std::string_view key) const {
  const auto* e = find(key);
  if (!e) return std::nullopt;
  std::vector<double> out;
  std::string_view rest = e->value;
  while (true) {
    const auto comma = rest.find(',');
    const auto v = to_double(rest.substr(0, comma));
    if (!v) throw ParseError(e->line, e->key + " must be a comma-separated list of numbers");
    out.push_back(*v);
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return out;
}

void KeyValues::reject_unknown() const {
  for (const auto& e : entries_) {
    if (!e.used) throw ParseError(e.line, "unknown key '" + e.key + "'");
  }
}

std::vector<int> parse_door_list(std::string_view text) {
  std::vector<int> out;
  std::string_view rest = trim(text);
  if (rest.empty()) return out;
  while (true) {
    const auto comma = rest.find(',');
    std::string_view item = trim(rest.substr(0, comma));
    if (!item.empty() && (item.back() == 'L' || item.back() == 'R' || item.back() == 'l' || item.back() == 'r')) {
      item.remove_suffix(1);
    }
    int id = 0;
    auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), id);
    if (item.empty() || ec != std::errc{} || ptr != item.data() + item.size() || id < 1 || id > 9) {
      throw ValidationError("bad door '" + std::string(item) + "' (expected 1..9, optionally followed by L or R)");
    }
    out.push_back(id);
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return out;
}

Direction parse_direction(std::string_view text) {
  if (text == "board" || text == "boarding") return Direction::Boarding;
  if (text == "deboard" || text == "deboarding") return Direction::Deboarding;
  throw ValidationError("direction must be board or deboard, got '" + std::string(text) + "'");
}

RunConfig parse_run_config(std::string_view text, const std::string& base_dir) {
  const auto kv = KeyValues::parse(text);
  RunConfig rc;
  auto& c = rc.sim;

  const auto layout = kv.text("layout");
  if (!layout) throw ValidationError("run config needs a layout");
  rc.layout_path = resolve(base_dir, *layout);
  c.grid = std::make_shared<const CabinGrid>(load_layout(rc.layout_path));

  if (auto v = kv.number("lf")) c.load_factor = *v;
  if (auto v = kv.number("if")) c.interference_factor = *v;
  if (auto v = kv.text("doors")) c.active_doors = parse_door_list(*v);
  const auto preset = kv.text("preset");
  const auto tlug = kv.number("tlug");
  if (preset && tlug) throw ValidationError("give either preset or tlug, not both");
  if (preset) c.luggage = LuggageTime::preset(*preset);
  if (tlug) c.luggage = LuggageTime::fixed(*tlug);
  if (auto v = kv.text("strategy")) {
    const auto kind = parse_strategy(*v);
    if (!kind) throw ValidationError("unknown strategy '" + *v + "'");
    c.strategy.kind = *kind;
  }
  if (auto v = kv.integer("zones")) c.strategy.zone_count = static_cast<int>(*v);
  if (auto v = kv.text("order")) c.strategy.order = load_user_order(resolve(base_dir, *v));
  if (auto v = kv.integer("seed")) c.seed.value = static_cast<std::uint64_t>(*v);
  if (auto v = kv.text("direction")) c.direction = parse_direction(*v);
  if (auto v = kv.text("door_assignment")) {
    if (*v == "nearest") {
      c.door_assignment = DoorAssignment::Nearest;
    } else if (*v == "balanced") {
      c.door_assignment = DoorAssignment::Balanced;
    } else {
      throw ValidationError("door_assignment must be nearest or balanced");
    }
  }
  if (auto v = kv.number("tick")) c.tick = *v;
  if (auto v = kv.number("equipment_delay")) c.equipment_delay = *v;
  if (auto v = kv.integer("runs")) rc.runs = static_cast<int>(*v);
  kv.reject_unknown();
  if (rc.runs < 1) throw ValidationError("runs must be >= 1");
  c.validate();
  return rc;
}

RunConfig load_run_config(const std::string& path) {
  return parse_run_config(slurp(path), std::filesystem::path(path).parent_path().string());
}

}  // namespace turnsim
