#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "seamloc/geometry.hpp"

using namespace seamloc;

namespace {

Segment2 random_segment(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  Segment2 s{{u(rng), u(rng)}, {u(rng), u(rng)}};
  return s;
}

Door door_at(Point2 c, Point2 tangent, std::string id = "d") {
  return Door{std::move(id), c, tangent, Environment::kIndoor, Environment::kOutdoor};
}

}  // namespace

TEST_CASE("segment_intersection: worked examples") {
  auto p = segment_intersection({{0, -2.5}, {0, 2.5}}, {{-1, 0}, {1, 0}});
  REQUIRE(p);
  CHECK(p->x == doctest::Approx(0.0));
  CHECK(p->y == doctest::Approx(0.0));

  p = segment_intersection({{0, 0}, {2, 2}}, {{0, 2}, {2, 0}});
  REQUIRE(p);
  CHECK(p->x == doctest::Approx(1.0));
  CHECK(p->y == doctest::Approx(1.0));

  CHECK_FALSE(segment_intersection({{0, 0}, {1, 0}}, {{0, 1}, {1, 1}}));
}

TEST_CASE("segment_intersection: collinear overlap and out-of-range hits are rejected") {
  CHECK_FALSE(segment_intersection({{0, 0}, {2, 0}}, {{1, 0}, {3, 0}}));
  // Supporting lines meet at (3, 0), outside the first segment.
  CHECK_FALSE(segment_intersection({{0, 0}, {2, 0}}, {{3, -1}, {3, 1}}));
}

TEST_CASE("segment_intersection: endpoints count (inclusive)") {
  const auto p = segment_intersection({{0, 0}, {1, 0}}, {{1, 0}, {1, 1}});
  REQUIRE(p);
  CHECK(p->x == doctest::Approx(1.0));
}

TEST_CASE("segment_intersection matches the parametric oracle on 1000 seeded pairs") {
  std::mt19937_64 rng(20240611);
  int hits = 0;
  for (int i = 0; i < 1000; ++i) {
    const Segment2 a = random_segment(rng);
    const Segment2 b = random_segment(rng);
    const auto got = segment_intersection(a, b);
    const auto want = oracle::parametric_intersection(a, b);
    REQUIRE(got.has_value() == want.has_value());
    if (got) {
      ++hits;
      CHECK(std::abs(got->x - want->x) <= 1e-9);
      CHECK(std::abs(got->y - want->y) <= 1e-9);
    }
  }
  CHECK(hits > 100);  // the sample exercises both branches
}

TEST_CASE("segment_intersection properties: symmetry, re-substitution, translation") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> shift(-50.0, 50.0);
  for (int i = 0; i < 2000; ++i) {
    const Segment2 a = random_segment(rng);
    const Segment2 b = random_segment(rng);
    const auto ab = segment_intersection(a, b);
    const auto ba = segment_intersection(b, a);
    REQUIRE(ab.has_value() == ba.has_value());
    if (!ab) continue;
    CHECK(distance(*ab, *ba) <= 1e-9);

    for (const Segment2& s : {a, b}) {
      const Point2 d = s.direction();
      const double t = dot(*ab - s.a, d) / dot(d, d);
      CHECK(t >= -1e-9);
      CHECK(t <= 1.0 + 1e-9);
      CHECK(distance(s.a + t * d, *ab) <= 1e-9);
    }

    const Point2 v{shift(rng), shift(rng)};
    const auto moved = segment_intersection({a.a + v, a.b + v}, {b.a + v, b.b + v});
    REQUIRE(moved);
    CHECK(distance(*moved, *ab + v) <= 1e-9);
  }
}

TEST_CASE("zone_for_door") {
  const CrossingZone z = zone_for_door(door_at({10, 5}, {1, 0}), 5.0);
  CHECK(z.segment.a == Point2{7.5, 5});
  CHECK(z.segment.b == Point2{12.5, 5});

  const CrossingZone narrow = zone_for_door(door_at({0, 0}, {0, 1}), 0.9);
  CHECK(narrow.segment.a.y == doctest::Approx(-0.45));
  CHECK(narrow.segment.b.y == doctest::Approx(0.45));

  CHECK_THROWS_AS(zone_for_door(door_at({0, 0}, {1, 0}), -1.0), Error);
  CHECK_THROWS_AS(zone_for_door(door_at({0, 0}, {1, 0}), 0.0), Error);
}

TEST_CASE("zone_for_door: midpoint and length invariants") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-100.0, 100.0);
  std::uniform_real_distribution<double> ang(-kPi, kPi);
  std::uniform_real_distribution<double> width(0.1, 10.0);
  for (int i = 0; i < 500; ++i) {
    const double a = ang(rng);
    const Door d = door_at({u(rng), u(rng)}, {std::cos(a), std::sin(a)});
    const double w = width(rng);
    const CrossingZone z = zone_for_door(d, w);
    CHECK(distance(z.segment.midpoint(), d.center) <= 1e-9);
    CHECK(std::abs(z.segment.length() - w) <= 1e-9);
  }
}

TEST_CASE("in_crossing_area is a closed disc") {
  const Door d = door_at({3, 4}, {1, 0});
  CHECK(in_crossing_area({3, 4}, d, 5.0));
  CHECK(in_crossing_area({8, 4}, d, 5.0));
  CHECK_FALSE(in_crossing_area({8.01, 4}, d, 5.0));
}

TEST_CASE("segment_hits_walls") {
  FloorPlan room;
  // 10 x 10 room; the east wall has a 0.9 m doorway centred at y = 5.
  room.walls = {{{0, 0}, {10, 0}}, {{10, 0}, {10, 4.55}}, {{10, 5.45}, {10, 10}},
                {{10, 10}, {0, 10}}, {{0, 10}, {0, 0}}};

  CHECK(segment_hits_walls({{9.5, 2}, {10.5, 2}}, room));   // right angle through the wall
  CHECK_FALSE(segment_hits_walls({{2, 2}, {2.75, 2}}, room));  // inside the empty room

  // Through the doorway: the oracle agrees for every wall piece.
  const Segment2 step{{9.625, 5.0}, {10.375, 5.0}};
  CHECK_FALSE(segment_hits_walls(step, room));
  for (const Segment2& w : room.walls) CHECK_FALSE(oracle::parametric_intersection(step, w));

  // Just outside the gap edge the wall is hit.
  CHECK(segment_hits_walls({{9.625, 4.5}, {10.375, 4.5}}, room));
}

TEST_CASE("wrap_angle range") {
  CHECK(wrap_angle(kPi) == doctest::Approx(kPi));
  CHECK(wrap_angle(-kPi) == doctest::Approx(kPi));
  CHECK(wrap_angle(3 * kPi / 2) == doctest::Approx(-kPi / 2));
  for (double a = -20.0; a < 20.0; a += 0.137) {
    const double w = wrap_angle(a);
    CHECK(w > -kPi);
    CHECK(w <= kPi);
  }
}

TEST_CASE("door and plan validation") {
  Door bad = door_at({0, 0}, {1, 0});
  bad.outer_env = bad.inner_env;
  CHECK_THROWS_AS(bad.validate(), Error);
  CHECK_THROWS_AS(door_at({0, 0}, {2, 0}).validate(), Error);
  CHECK_THROWS_AS((Segment2{{1, 1}, {1, 1}}.validate()), Error);
}
