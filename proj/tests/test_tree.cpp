#include <gtest/gtest.h>

#include <deque>
#include <map>

#include "admissible/verifier.hpp"

using namespace admissible;

namespace {

GroupElement rnd(const Amalgam& G, std::uint64_t seed, std::size_t n = 12) {
  return random_word(G, n, seed, G.uniform_generator_measure());
}

}  // namespace

TEST(Tree, IndexMapExamples) {
  Amalgam G;
  EXPECT_EQ(index_map(G.identity()), TreeVertex{});
  EXPECT_EQ(index_map(G.parse_word("a1 b1 t1")), TreeVertex{});
  EXPECT_EQ(block_vertex(G.parse_word("a1 a2")).str(), "v2[a]");
  EXPECT_EQ(index_map(G.parse_word("a1 a2")).str(), "v1[a,a]");
  EXPECT_EQ(tree_distance(TreeVertex{}, index_map(G.parse_word("a1 a2 a1"))), 2u);
}

TEST(Tree, IndexMapIsEquivariant) {
  Amalgam G;
  for (std::uint64_t s = 0; s < 1000; ++s) {
    GroupElement g = rnd(G, 2 * s), x = rnd(G, 2 * s + 1);
    EXPECT_EQ(index_map(G.multiply(g, x)), act(G, g, index_map(x)));
  }
}

TEST(Tree, ActionIsAnIsometry) {
  Amalgam G;
  for (std::uint64_t s = 0; s < 500; ++s) {
    GroupElement g = rnd(G, 3 * s), x = rnd(G, 3 * s + 1), y = rnd(G, 3 * s + 2);
    TreeVertex P = index_map(x), Q = index_map(y);
    EXPECT_EQ(tree_distance(act(G, g, P), act(G, g, Q)), tree_distance(P, Q));
  }
}

TEST(Tree, GeneratorsMoveTheIndexByAtMostTwo) {
  Amalgam G;
  for (std::uint64_t s = 0; s < 500; ++s) {
    GroupElement x = rnd(G, s);
    for (std::size_t g = 0; g < 10; ++g)
      EXPECT_LE(tree_distance(index_map(x), index_map(G.multiply(x, G.generator(g)))), 2u);
  }
}

TEST(Tree, DistanceMatchesBreadthFirstSearch) {
  Amalgam G;
  auto ball = tree_ball(G, TreeVertex{}, 4);
  std::map<TreeVertex, std::size_t> bfs{{TreeVertex{}, 0}};
  std::deque<TreeVertex> q{TreeVertex{}};
  while (!q.empty()) {
    TreeVertex v = q.front();
    q.pop_front();
    if (bfs[v] == 4) continue;
    for (const auto& n : local_neighbors(G, v))
      if (bfs.emplace(n, bfs[v] + 1).second) q.push_back(n);
  }
  for (const auto& v : ball) EXPECT_EQ(tree_distance(TreeVertex{}, v), bfs.at(v)) << v.str();
}

TEST(Tree, GeodesicsAreConsecutivelyAdjacent) {
  Amalgam G;
  for (std::uint64_t s = 0; s < 300; ++s) {
    TreeVertex P = index_map(rnd(G, 2 * s)), Q = index_map(rnd(G, 2 * s + 1));
    auto path = tree_geodesic(P, Q);
    ASSERT_EQ(path.size(), tree_distance(P, Q) + 1);
    EXPECT_EQ(path.front(), P);
    EXPECT_EQ(path.back(), Q);
    for (std::size_t i = 1; i < path.size(); ++i) {
      EXPECT_TRUE(adjacent(path[i - 1], path[i]));
      EXPECT_EQ(neighbor(path[i - 1], edge_label(path[i - 1], path[i])), path[i]);
    }
    if (!(P == Q)) EXPECT_EQ(step_toward(P, Q), path[1]);
  }
}

TEST(Tree, RootLabelsAndTypes) {
  Amalgam G;
  auto labels = short_labels(G, 0);
  std::vector<std::string> names;
  for (const auto& u : labels) names.push_back(u.str());
  EXPECT_EQ(names, (std::vector<std::string>{"", "a", "A", "B"}));
  for (const auto& n : local_neighbors(G, TreeVertex{})) EXPECT_EQ(n.type(), 1);
}

TEST(Tree, LimitRayOfAPowerStabilizes) {
  Amalgam G;
  GroupElement g = G.parse_word("a1 a2"), w;
  std::vector<GroupElement> pos{w};
  for (int i = 0; i < 40; ++i) pos.push_back(w = G.multiply(w, g));
  TreeRay ray = limit_ray(pos);
  ASSERT_GE(ray.depth(), 3u);
  EXPECT_EQ(ray.vertices[0], TreeVertex{});
  EXPECT_EQ(ray.vertices[1].str(), "v2[a]");
  EXPECT_EQ(ray.vertices[2].str(), "v1[a,a]");
  for (std::size_t i = 1; i < ray.vertices.size(); ++i) EXPECT_TRUE(adjacent(ray.vertices[i - 1], ray.vertices[i]));
}

TEST(Tree, EllipticPathsDoNotStabilize) {
  Amalgam G;
  std::vector<GroupElement> pos;
  GroupElement w;
  for (int i = 0; i < 40; ++i) pos.push_back(w = G.multiply(w, G.parse_word("t1")));
  EXPECT_THROW(limit_ray(pos), NotStabilized);
}
