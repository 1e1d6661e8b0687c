#include <gtest/gtest.h>

#include "admissible/coned.hpp"
#include "oracles.hpp"

using namespace admissible;

TEST(Blocks, LocateEmbedRoundTrip) {
  Amalgam G;
  Measure mu = G.uniform_generator_measure();
  for (std::uint64_t s = 0; s < 1000; ++s) {
    GroupElement x = random_word(G, 14, s, mu);
    BlockPoint p = locate(G, x);
    EXPECT_EQ(p.vertex, block_vertex(x));
    EXPECT_EQ(embed(G, p), x) << G.spell(x);
  }
}

TEST(Blocks, FiberReading) {
  Amalgam G;
  BlockPoint p = locate(G, G.parse_word("t1^5"));
  EXPECT_EQ(p.vertex, TreeVertex{});
  EXPECT_EQ(p.fiber, 5);
  EXPECT_TRUE(p.base.empty());
}

TEST(Blocks, BoundaryLinesAtTheRoot) {
  Amalgam G;
  auto lines = boundary_lines(G, TreeVertex{}, 2);
  std::set<std::string> labels;
  for (const auto& l : lines) {
    labels.insert(l.label.str());
    EXPECT_EQ(coset_rep(l.label, G.h(0)), l.label);
    EXPECT_TRUE(adjacent(l.owner, l.across));
  }
  EXPECT_TRUE(labels.count(""));
  EXPECT_TRUE(labels.count("a"));
  EXPECT_FALSE(labels.count("b"));  // b = a^-1 h lies in the coset of a^-1
  EXPECT_THROW(boundary_lines(G, TreeVertex{}, kBallCap + 1), ResourceCapError);
}

TEST(Blocks, EveryVertexLiesOnABoundaryLine) {
  Amalgam G;
  for (int t = 0; t < 2; ++t) EXPECT_EQ(covering_constant(G, t, 4), 0u);
}

TEST(Blocks, LineProjectionMatchesBruteForce) {
  Amalgam G;
  const FreeWord& h = G.h(0);
  auto labels = boundary_lines(G, TreeVertex{}, 3);
  for (const auto& l1 : labels)
    for (const auto& l2 : labels) {
      if (l1.label == l2.label) {
        EXPECT_THROW(line_projection_letters(h, l1.label, l2.label), std::invalid_argument);
        continue;
      }
      auto [lo, hi] = line_projection_letters(h, l1.label, l2.label);
      long plo = 1 << 20, phi = -(1 << 20);
      for (long p = -30; p <= 30; ++p) {
        std::string v = oracle::reduce(l1.label.str() + oracle::power_prefix(h.str(), p));
        auto hit = oracle::axis_projection(v, h.str(), l2.label.str(), 60);
        plo = std::min(plo, hit.position);
        phi = std::max(phi, hit.position);
      }
      EXPECT_EQ(lo, plo) << l1.label.str() << " -> " << l2.label.str();
      EXPECT_EQ(hi, phi) << l1.label.str() << " -> " << l2.label.str();
    }
}

TEST(Blocks, StripExamples) {
  Amalgam G;
  Strip s = strip(G, TreeVertex{}, FreeWord{}, word("b"));
  EXPECT_EQ(s.width, 0u);
  Strip t = strip(G, TreeVertex{}, FreeWord{}, word("a"));
  EXPECT_DOUBLE_EQ(t.on_first.length(), 0.0);
  EXPECT_THROW(strip(G, TreeVertex{}, word("a"), word("a")), std::invalid_argument);
  PlaneLine p = strip_plane_intersection(G, t, word("a"));
  EXPECT_EQ(p.across, neighbor(TreeVertex{}, word("a")));
  EXPECT_THROW(strip_plane_intersection(G, t, word("A")), std::invalid_argument);
}

TEST(Blocks, StripWidthIsTheLineDistance) {
  Amalgam G;
  const FreeWord& h = G.h(0);
  auto labels = boundary_lines(G, TreeVertex{}, 3);
  for (std::size_t i = 0; i < labels.size(); ++i)
    for (std::size_t j = i + 1; j < labels.size(); ++j) {
      Strip s = strip(G, TreeVertex{}, labels[i].label, labels[j].label);
      std::size_t best = static_cast<std::size_t>(-1);
      for (long p = -20; p <= 20; ++p)
        for (long q = -20; q <= 20; ++q)
          best = std::min(best, oracle::dist(oracle::reduce(labels[i].label.str() + oracle::power_prefix(h.str(), p)),
                                             oracle::reduce(labels[j].label.str() + oracle::power_prefix(h.str(), q))));
      EXPECT_EQ(s.width, best);
    }
}

TEST(Blocks, GateAtHomeReadsTheFiber) {
  Amalgam G;
  Gate g = gate(G, G.parse_word("a1 t1^3"), TreeVertex{});
  EXPECT_EQ(g.at, TreeVertex{});
  EXPECT_DOUBLE_EQ(g.fiber, 3);
  EXPECT_FALSE(g.entry.has_value());
}

TEST(Blocks, GateCrossesOneEdge) {
  Amalgam G;
  GroupElement x = G.parse_word("t1^4");
  TreeVertex v2 = neighbor(TreeVertex{}, FreeWord{});
  Gate g = gate(G, x, v2);
  EXPECT_EQ(g.at, v2);
  ASSERT_TRUE(g.entry.has_value());
  EXPECT_TRUE(g.entry->empty());
  // t1 = h2 under the flip, so the point sits at h-position 4 of the entry line with fiber 0
  EXPECT_DOUBLE_EQ(g.rcoord.lo, 0);
  EXPECT_DOUBLE_EQ(g.fiber, 0);
  EXPECT_EQ(g.base, power(G.h(1), 4));
}
