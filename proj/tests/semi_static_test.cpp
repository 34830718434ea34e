#include "fdh/semi_static.hpp"

#include <gtest/gtest.h>

#include <random>

#include "fdh/oracle.hpp"

using namespace fdh;

TEST(SemiStatic, InteriorInsertKeepsChains) {
  SemiStatic s;
  s.insert({0, 0});
  s.insert({100, 0});
  s.insert({50, 100});
  const auto rebuilds = s.rebuilds();
  const Chain upper = s.upper();
  s.insert({50, 10});
  EXPECT_EQ(s.rebuilds(), rebuilds);
  EXPECT_EQ(s.upper(), upper);
  s.erase({50, 10});
  EXPECT_EQ(s.rebuilds(), rebuilds);
}

TEST(SemiStatic, OutsideInsertRebuilds) {
  SemiStatic s;
  s.insert({0, 0});
  s.insert({100, 0});
  s.insert({50, 100});
  const auto rebuilds = s.rebuilds();
  s.insert({50, 200});
  EXPECT_EQ(s.rebuilds(), rebuilds + 1);
  EXPECT_TRUE(s.contains({50, 200}));
  EXPECT_EQ(s.upper(), (Chain{{0, 0}, {50, 200}, {100, 0}}));
  s.erase({50, 200});
  EXPECT_EQ(s.upper(), (Chain{{0, 0}, {50, 100}, {100, 0}}));
}

TEST(SemiStatic, ExtremeAndErrors) {
  SemiStatic s;
  EXPECT_EQ(s.extreme_point({0, 1}), std::nullopt);
  s.insert({0, 0});
  s.insert({1, 5});
  s.insert({2, 0});
  s.insert({1, -3});
  EXPECT_EQ(s.extreme_point({0, 1}), (Point{1, 5}));
  EXPECT_EQ(s.extreme_point({0, -1}), (Point{1, -3}));
  EXPECT_EQ(s.extreme_point({1, 0}), (Point{2, 0}));
  EXPECT_THROW(s.extreme_point({0, 0}), std::invalid_argument);
  EXPECT_THROW(s.erase({9, 9}), Error);
  EXPECT_THROW(s.erase({1, 4}), Error);
}

TEST(SemiStatic, MatchesOracleOnMixedOps) {
  std::mt19937_64 rng(41);
  for (Coord range : {Coord{10}, Coord{1000}}) {
    std::uniform_int_distribution<Coord> c(0, range);
    std::uniform_int_distribution<Coord> dir(-4, 4);
    SemiStatic s;
    OracleSet oracle;
    std::vector<Point> live;
    for (int step = 0; step < 10000; ++step) {
      if (live.empty() || rng() % 2 == 0) {
        Point p{c(rng), c(rng)};
        if (!live.empty() && rng() % 10 == 0) p = live[rng() % live.size()];
        s.insert(p);
        oracle.insert(p);
        live.push_back(p);
      } else {
        const std::size_t k = rng() % live.size();
        const Point p = live[k];
        live[k] = live.back();
        live.pop_back();
        s.erase(p);
        oracle.erase(p);
      }
      ASSERT_EQ(s.upper(), oracle.hull().upper) << step;
      ASSERT_EQ(s.lower(), oracle.hull().lower) << step;
      ASSERT_EQ(s.hull_size(), oracle.hull_size());
      const Point q{c(rng), c(rng)};
      ASSERT_EQ(s.contains(q), oracle.contains(q));
      Point d{dir(rng), dir(rng)};
      if (d.x == 0 && d.y == 0) d = {0, 1};
      const auto e = s.extreme_point(d);
      ASSERT_EQ(e.has_value(), oracle.size() > 0);
      if (e) {
        ASSERT_EQ(score(*e, d), *oracle.extreme_score(d));
      }
    }
  }
}
