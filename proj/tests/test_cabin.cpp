#include <doctest.h>

#include <cmath>

#include "support/random_cabin.hpp"
#include "turnsim/cabin.hpp"
#include "turnsim/errors.hpp"

using namespace turnsim;

namespace {

std::string data(const std::string& rel) { return std::string(TURNSIM_DATA_DIR) + "/" + rel; }

}  // namespace

TEST_CASE("smallest cabin: door, aisle, seat") {
  const auto g = parse_layout("L_H=3 L_V=1\n1.S\n");
  CHECK(g.n_h() == 3);
  CHECK(g.n_v() == 1);
  REQUIRE(g.doors().size() == 1);
  REQUIRE(g.seats().size() == 1);
  CHECK(g.seats()[0].row_entry_cell == Coord{1, 0});
  CHECK(g.seats()[0].path_from_aisle.size() == 1);
}

TEST_CASE("shipped single-aisle layouts have 189 seats") {
  const auto b737 = load_layout(data("layouts/b737.cab"));
  CHECK(b737.seats().size() == 189);
  CHECK(b737.doors().size() == 1);
  CHECK_FALSE(b737.has_wide_aisle());
  CHECK(load_layout(data("layouts/a320.cab")).seats().size() == 189);
  CHECK(load_layout(data("layouts/b767.cab")).seats().size() == 300);
  CHECK(load_layout(data("layouts/a330.cab")).seats().size() == 300);
  const auto prp = load_layout(data("layouts/prp_wide.cab"));
  CHECK(prp.seats().size() == 308);
  CHECK(prp.doors().size() == 3);
  CHECK(prp.has_wide_aisle());
  CHECK_FALSE(load_layout(data("layouts/prp_narrow.cab")).has_wide_aisle());
}

TEST_CASE("a wall cutting a seat off the doors is rejected") {
  const char* text =
      "L_H=4 L_V=3\n"
      "#1##\n"
      "#..#\n"
      "####\n"
      "#S.#\n";
  CHECK_THROWS_AS(parse_layout(text), ConnectivityError);
  try {
    parse_layout(text);
  } catch (const ConnectivityError& e) {
    CHECK(e.seat() == "1A");
  }
}

TEST_CASE("malformed layouts report the offending line") {
  SUBCASE("unknown character") {
    try {
      parse_layout("# c\nL_H=3 L_V=1\n1.X\n");
      FAIL("no throw");
    } catch (const ParseError& e) {
      CHECK(e.line() == 3);
    }
  }
  SUBCASE("ragged line") {
    try {
      parse_layout("L_H=3 L_V=2\n1.S\n1.\n");
      FAIL("no throw");
    } catch (const ParseError& e) {
      CHECK(e.line() == 3);
    }
  }
  SUBCASE("bad header") {
    CHECK_THROWS_AS(parse_layout("L_H=abc L_V=1\n1.S\n"), ParseError);
    CHECK_THROWS_AS(parse_layout("L_H=3\n1.S\n"), ParseError);
    CHECK_THROWS_AS(parse_layout("L_H=0 L_V=1\n1.S\n"), ParseError);
    CHECK_THROWS_AS(parse_layout(""), ParseError);
  }
  SUBCASE("space is not a cell") { CHECK_THROWS_AS(parse_layout("L_H=3 L_V=1\n1 S\n"), ParseError); }
  SUBCASE("no seats or doors") {
    CHECK_THROWS_AS(parse_layout("L_H=3 L_V=1\n1..\n"), ValidationError);
    CHECK_THROWS_AS(parse_layout("L_H=3 L_V=1\n#.S\n"), ValidationError);
  }
}

TEST_CASE("gamma") {
  const auto grid = [](double lh, int nh, double lv, int nv) {
    std::string text = "L_H=" + std::to_string(lh) + " L_V=" + std::to_string(lv) + "\n";
    for (int y = 0; y < nv; ++y) {
      std::string row(static_cast<std::size_t>(nh), '.');
      if (y == 0) row[0] = '1';
      if (y == 0) row[2] = 'S';
      text += row + "\n";
    }
    return parse_layout(text);
  };
  CHECK(gamma(grid(30, 60, 4, 8)) == doctest::Approx(1.0));
  CHECK(gamma(grid(30, 60, 4, 16)) == doctest::Approx(2.0));

  Rng rng(11);
  for (int k = 0; k < 100; ++k) {
    const int nh = 3 + static_cast<int>(rng.below(60));
    const int nv = 1 + static_cast<int>(rng.below(20));
    const double lh = 1.0 + 40.0 * rng.uniform();
    const double lv = 0.5 + 6.0 * rng.uniform();
    const auto g = grid(lh, nh, lv, nv);
    // Independent formula, evaluated on the values the parser actually stored.
    const double direct = (g.length_h() * nv) / (g.length_v() * nh);
    CHECK(gamma(g) == doctest::Approx(direct).epsilon(1e-12));
    const double ulp = std::nextafter(g.unit_h(), INFINITY) - g.unit_h();
    CHECK(std::abs(gamma(g) * g.unit_v() - g.unit_h()) <= ulp);
  }
}

TEST_CASE("manhattan distance") {
  CHECK(manhattan_distance({0, 0}, {0, 0}) == 0);
  CHECK(manhattan_distance({1, 2}, {4, 6}) == 7);

  // The locus at distance k is a diamond with 4k cells.
  for (int k = 1; k <= 3; ++k) {
    int count = 0;
    for (int x = -5; x <= 5; ++x) {
      for (int y = -5; y <= 5; ++y) {
        if (manhattan_distance({0, 0}, {x, y}) == k) {
          ++count;
          CHECK(std::abs(x) + std::abs(y) == k);
        }
      }
    }
    CHECK(count == 4 * k);
  }

  Rng rng(5);
  const auto rc = [&] { return Coord{static_cast<int>(rng.below(200)) - 100, static_cast<int>(rng.below(200)) - 100}; };
  for (int i = 0; i < 1000; ++i) {
    const Coord p = rc(), q = rc(), r = rc();
    CHECK(manhattan_distance(p, q) == manhattan_distance(q, p));
    CHECK(manhattan_distance(p, r) <= manhattan_distance(p, q) + manhattan_distance(q, r));
    CHECK((manhattan_distance(p, q) == 0) == (p == q));
  }
}

TEST_CASE("seat labels and row entries") {
  const auto g = parse_layout(
      "L_H=5 L_V=5\n"
      "#1###\n"
      "#.SS#\n"
      "#...#\n"
      "#.SS#\n"
      "#####\n");
  REQUIRE(g.seats().size() == 4);
  for (const auto& s : g.seats()) {
    CHECK(g.kind(s.row_entry_cell) == CellKind::Aisle);
    CHECK(manhattan_distance(s.row_entry_cell, s.path_from_aisle.front()) == 1);
    CHECK(s.path_from_aisle.back() == s.cell);
    CHECK(s.row_entry_cell.x == s.cell.x);
  }
  CHECK(g.seat_index("1A") >= 0);
  CHECK(g.seat_index("2B") >= 0);
  CHECK(g.seat_index("3A") == -1);
  CHECK(g.seat_row_count() == 2);
}

TEST_CASE("round trip: parse, serialize, parse (random cabins)") {
  Rng rng(2024);
  for (int k = 0; k < 150; ++k) {
    const auto spec = testing::random_spec(rng, 2);
    const auto a = parse_layout(testing::render(spec));
    const auto text = serialize_layout(a);
    const auto b = parse_layout(text);
    REQUIRE(a.n_h() == b.n_h());
    REQUIRE(a.n_v() == b.n_v());
    CHECK(a.length_h() == b.length_h());
    CHECK(a.length_v() == b.length_v());
    for (int y = 0; y < a.n_v(); ++y) {
      for (int x = 0; x < a.n_h(); ++x) CHECK(a.kind({x, y}) == b.kind({x, y}));
    }
    REQUIRE(a.seats().size() == b.seats().size());
    for (std::size_t i = 0; i < a.seats().size(); ++i) {
      CHECK(a.seats()[i].id == b.seats()[i].id);
      CHECK(a.seats()[i].row_entry_cell == b.seats()[i].row_entry_cell);
    }
    REQUIRE(a.doors().size() == b.doors().size());
    for (std::size_t i = 0; i < a.doors().size(); ++i) CHECK(a.doors()[i].id == b.doors()[i].id);
    CHECK(serialize_layout(b) == text);
  }
}
