#include <gtest/gtest.h>

#include "admissible/coned.hpp"
#include "oracles.hpp"

using namespace admissible;

TEST(Coned, ApexShortcut) {
  FreeWord h = word("ab");
  EXPECT_EQ(hat_distance(h, FreeWord{}, power(h, 10)), 2u);
  EXPECT_EQ(hat_distance(h, FreeWord{}, word("a")), 1u);
  EXPECT_EQ(hat_distance(h, FreeWord{}, FreeWord{}), 0u);
  EXPECT_EQ(hat_distance(h, hat_vertex(FreeWord{}), hat_apex(FreeWord{})), 1u);
}

TEST(Coned, LinesThroughAVertex) {
  FreeWord h = word("ab");
  for (const auto& x : free_ball(3)) {
    auto ls = lines_through(h, x);
    ASSERT_EQ(ls.size(), h.size());
    for (const auto& u : ls) EXPECT_TRUE(on_line(h, u, x));
    EXPECT_NE(ls[0], ls[1]);
  }
}

TEST(Coned, ClosedFormMatchesExplicitBreadthFirstSearch) {
  FreeWord h = word("ab");
  auto ball = free_ball(3);
  std::size_t checked = 0;
  for (std::size_t i = 0; i < ball.size(); i += 5)
    for (std::size_t j = 0; j < ball.size(); j += 7) {
      std::size_t want = oracle::coned_bfs(h.str(), ball[i].str(), ball[j].str(), 8);
      EXPECT_EQ(hat_distance(h, ball[i], ball[j]), want) << ball[i].str() << " " << ball[j].str();
      ++checked;
    }
  EXPECT_GT(checked, 80u);
}

TEST(Coned, ClosedFormMatchesTruncatedGraph) {
  FreeWord h = word("ab");
  auto ball = free_ball(3);
  std::mt19937_64 rng(3);
  for (int n = 0; n < 100; ++n) {
    const FreeWord& x = ball[rng() % ball.size()];
    const FreeWord& y = ball[rng() % ball.size()];
    EXPECT_EQ(hat_distance(h, x, y), coned_graph_distance(h, hat_vertex(x), hat_vertex(y), 8));
  }
}

TEST(Coned, ApexDistancesMatchTheGraph) {
  FreeWord h = word("ab");
  auto labels = free_ball(1);
  for (const auto& u : labels) {
    FreeWord lu = coset_rep(u, h);
    for (const auto& x : free_ball(2))
      EXPECT_EQ(hat_distance(h, hat_apex(lu), hat_vertex(x)), coned_graph_distance(h, hat_apex(lu), hat_vertex(x), 8));
    for (const auto& v : labels) {
      FreeWord lv = coset_rep(v, h);
      EXPECT_EQ(hat_distance(h, hat_apex(lu), hat_apex(lv)), coned_graph_distance(h, hat_apex(lu), hat_apex(lv), 8))
          << lu.str() << " " << lv.str();
    }
  }
}

TEST(Coned, RoutesAreRealizedPaths) {
  FreeWord h = word("ab");
  for (const auto& x : free_ball(3)) {
    FreeWord y = mul(x, word("abababaB"));
    HatRoute r = hat_route(h, x, y, true);
    ASSERT_FALSE(r.points.empty());
    EXPECT_EQ(r.points.front(), hat_vertex(x));
    EXPECT_EQ(r.points.back(), hat_vertex(y));
    EXPECT_EQ(r.points.size(), r.length + 1);
    for (std::size_t i = 1; i < r.points.size(); ++i)
      EXPECT_EQ(hat_distance(h, r.points[i - 1], r.points[i]), 1u);
  }
}

TEST(Coned, HatDistanceIsAMetric) {
  FreeWord h = word("ab");
  auto ball = free_ball(3);
  std::mt19937_64 rng(4);
  for (int n = 0; n < 500; ++n) {
    const FreeWord &x = ball[rng() % ball.size()], &y = ball[rng() % ball.size()], &z = ball[rng() % ball.size()];
    EXPECT_EQ(hat_distance(h, x, y), hat_distance(h, y, x));
    EXPECT_LE(hat_distance(h, x, z), hat_distance(h, x, y) + hat_distance(h, y, z));
    EXPECT_LE(hat_distance(h, x, y), tree_distance(x, y));
  }
}
