#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>

#include "support/random_cabin.hpp"
#include "turnsim/errors.hpp"

using namespace turnsim;
using turnsim::testing::random_spec;
using turnsim::testing::render;

namespace {

const char* kSmall =
    "L_H=4.8 L_V=2.8\n"
    "#1####\n"
    "#.SSSS\n"
    "#.SSSS\n"
    "#.....\n"
    "#.SSSS\n"
    "#.SSSS\n"
    "######\n";

std::vector<int> all_seats(const CabinGrid& g) {
  std::vector<int> v(g.seats().size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<int>(i);
  return v;
}

bool is_permutation_of(std::vector<int> a, std::vector<int> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

}  // namespace

TEST_CASE("strategy names round-trip") {
  for (const auto k : {StrategyKind::Random, StrategyKind::OutsideIn, StrategyKind::BackToFront,
                       StrategyKind::RotatingZone, StrategyKind::UserDefined}) {
    CHECK(parse_strategy(strategy_name(k)) == k);
  }
  CHECK_FALSE(parse_strategy("window-first"));
}

TEST_CASE("passenger_count rounds LF times seats") {
  const auto g = parse_layout(kSmall);
  REQUIRE(g.seats().size() == 16);
  CHECK(passenger_count(g, 1.0) == 16);
  CHECK(passenger_count(g, 0.5) == 8);
  CHECK(passenger_count(g, 0.0) == 0);
  CHECK(passenger_count(g, 0.85) == 14);  // 13.6
}

TEST_CASE("assign_seats draws a uniform subset") {
  const auto g = parse_layout(kSmall);
  Rng rng(9);
  CHECK_THROWS_AS(assign_seats(g, 1.2, rng), ValidationError);
  std::vector<int> hits(g.seats().size(), 0);
  const int trials = 4000;
  for (int t = 0; t < trials; ++t) {
    const auto s = assign_seats(g, 0.5, rng);
    REQUIRE(s.size() == 8);
    CHECK(std::is_sorted(s.begin(), s.end()));
    CHECK(std::adjacent_find(s.begin(), s.end()) == s.end());
    for (const int i : s) ++hits[static_cast<std::size_t>(i)];
  }
  for (const int h : hits) CHECK(static_cast<double>(h) / trials == doctest::Approx(0.5).epsilon(0.1));
}

TEST_CASE("outside-in boards window seats before middle before aisle") {
  const auto g = parse_layout(kSmall);
  Rng rng(1);
  const auto seats = all_seats(g);
  const auto order = entry_order({StrategyKind::OutsideIn, 4, {}}, g, seats, rng);
  CHECK(is_permutation_of(order, seats));
  std::size_t depth = 99;
  for (const int s : order) {
    const auto d = g.seats()[static_cast<std::size_t>(s)].path_from_aisle.size();
    CHECK(d <= depth);
    depth = d;
  }
}

TEST_CASE("back-to-front boards the rear zone first") {
  const auto g = parse_layout(kSmall);
  Rng rng(2);
  const auto order = entry_order({StrategyKind::BackToFront, 2, {}}, g, all_seats(g), rng);
  // Rows 3-4 form the rear zone, rows 1-2 the front.
  for (std::size_t i = 0; i < order.size(); ++i) {
    const int row = g.seats()[static_cast<std::size_t>(order[i])].row;
    CHECK((i < 8 ? row >= 3 : row <= 2));
  }
}

TEST_CASE("rotating zone alternates rear and front") {
  const auto g = parse_layout(kSmall);
  Rng rng(3);
  const auto order = entry_order({StrategyKind::RotatingZone, 4, {}}, g, all_seats(g), rng);
  // Four zones of one row each: 4, 1, 3, 2.
  const int expected[] = {4, 1, 3, 2};
  for (std::size_t i = 0; i < order.size(); ++i) {
    CHECK(g.seats()[static_cast<std::size_t>(order[i])].row == expected[i / 4]);
  }
}

TEST_CASE("user order is validated against the seat set") {
  const auto g = parse_layout(kSmall);
  Rng rng(4);
  const std::vector<int> two{0, 5};
  BoardingStrategy user{StrategyKind::UserDefined, 4, {g.seats()[5].id, g.seats()[0].id}};
  CHECK(entry_order(user, g, two, rng) == std::vector<int>{5, 0});
  user.order = {g.seats()[5].id};
  CHECK_THROWS_AS(entry_order(user, g, two, rng), ValidationError);
  user.order = {g.seats()[5].id, g.seats()[5].id};
  CHECK_THROWS_AS(entry_order(user, g, two, rng), ValidationError);
  user.order = {g.seats()[5].id, "99Z"};
  CHECK_THROWS_AS(entry_order(user, g, two, rng), ValidationError);
}

TEST_CASE("order files skip comments and blanks") {
  const std::string path = "strategy_order_test.txt";
  {
    std::ofstream out(path);
    out << "# window first\n1A\n\n  2B  \n";
  }
  CHECK(load_user_order(path) == std::vector<std::string>{"1A", "2B"});
  std::remove(path.c_str());
  CHECK_THROWS(load_user_order("no/such/file"));
}

TEST_CASE("property: every strategy yields a permutation; outside-in needs no seat maneuvers") {
  Rng rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const auto g = std::make_shared<const CabinGrid>(parse_layout(render(random_spec(rng, 2))));
    const auto seats = assign_seats(*g, 0.2 + 0.8 * rng.uniform(), rng);
    if (seats.empty()) continue;
    for (const auto k : {StrategyKind::Random, StrategyKind::OutsideIn, StrategyKind::BackToFront,
                         StrategyKind::RotatingZone}) {
      BoardingStrategy s{k, 1 + static_cast<int>(rng.below(5)), {}};
      CHECK(is_permutation_of(entry_order(s, *g, seats, rng), seats));
    }
    SimConfig cfg;
    cfg.grid = g;
    cfg.strategy.kind = StrategyKind::OutsideIn;
    cfg.load_factor = 1.0;
    // Overtaking or a second door could let an aisle passenger arrive first.
    cfg.interference_factor = 1.0;
    cfg.active_doors = {1};
    cfg.seed = RngSeed{rng()};
    CHECK(run(cfg).maneuvers == 0);
  }
}
