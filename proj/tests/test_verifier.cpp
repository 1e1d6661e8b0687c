#include <gtest/gtest.h>

#include "admissible/verifier.hpp"

using namespace admissible;

namespace {

CheckParams small(int radius = 4) {
  CheckParams p;
  p.radius = radius;
  p.samples = 60;
  p.seed = 3;
  return p;
}

}  // namespace

TEST(Trend, EmptyRadiiGiveAnEmptyTable) {
  Amalgam G;
  Verifier V(G);
  EXPECT_TRUE(V.stability_sweep("consistency-club", {}, small()).empty());
  EXPECT_TRUE(trend_table({}, 0.1).empty());
}

TEST(Trend, GrowthFlags) {
  auto t = trend_table({{4, 1.0}, {5, 1.05}, {6, 1.3}}, 0.1);
  ASSERT_EQ(t.size(), 3u);
  EXPECT_FALSE(t[0].flagged);
  EXPECT_FALSE(t[1].flagged);
  EXPECT_TRUE(t[2].flagged);
  auto z = trend_table({{4, 0.0}, {5, 0.5}}, 0.1);
  EXPECT_TRUE(z[1].flagged);
  EXPECT_TRUE(std::isinf(z[1].growth));
  auto d = trend_table({{4, 2.0}, {5, 1.0}, {6, 1.0}}, 0.1);
  for (const auto& r : d) EXPECT_FALSE(r.flagged);
}

TEST(Suite, IdsAndSelfAudit) {
  EXPECT_EQ(axiom_check_ids().size(), 14u);
  EXPECT_EQ(distance_check_ids().size(), 2u);
  auto all = all_check_ids();
  std::set<std::string> unique(all.begin(), all.end());
  EXPECT_EQ(unique.size(), 16u);
  std::vector<CheckReport> partial(1);
  partial[0].id = "complexity";
  auto missing = Verifier::self_audit(partial, axiom_check_ids());
  EXPECT_EQ(missing.size(), 13u);
  EXPECT_EQ(std::count(missing.begin(), missing.end(), "complexity"), 0);
}

TEST(Checks, Complexity) {
  Amalgam G;
  Verifier V(G);
  CheckReport r = V.run_check("complexity", small());
  EXPECT_EQ(r.status, "pass");
  EXPECT_EQ(r.constant("complexity"), 3);
}

TEST(Checks, UnknownIdThrows) {
  Amalgam G;
  Verifier V(G);
  EXPECT_THROW(V.run_check("no-such-check", small()), std::invalid_argument);
}

TEST(Checks, DiamondIsExhaustive) {
  Amalgam G;
  Verifier V(G);
  CheckParams p = small(2);
  CheckReport a = V.run_check("consistency-diamond", p), b = V.run_check("consistency-diamond", p);
  EXPECT_EQ(a.constant("kappa0"), b.constant("kappa0"));
  EXPECT_GT(a.constant("triples"), 0);
  EXPECT_TRUE(std::isfinite(a.constant("kappa0")));
}

TEST(Checks, SampledChecksAreDeterministic) {
  Amalgam G;
  Verifier V(G);
  for (const char* id : {"projection-lipschitz", "consistency-club", "consistency-spade", "bounded-geodesic-image"}) {
    CheckReport a = V.run_check(id, small()), b = V.run_check(id, small());
    EXPECT_EQ(a.constants.front().value, b.constants.front().value) << id;
    EXPECT_EQ(a.witness, b.witness) << id;
    EXPECT_EQ(a.status, "pass") << id;
  }
}

TEST(Checks, LineStructure) {
  Amalgam G;
  Verifier V(G);
  EXPECT_EQ(V.run_check("line-covering", small()).constant("r"), 0);
  EXPECT_EQ(V.run_check("strip-epsilon", small()).constant("epsilon"), 0);
  EXPECT_TRUE(std::isfinite(V.run_check("line-malnormality", small()).constant("diameter")));
  CheckReport k = V.run_check("lemma-k", small());
  EXPECT_EQ(k.status, "pass");
  EXPECT_GE(k.constant("A"), 1);
}

TEST(Checks, IndexMapIsTwoLipschitz) {
  Amalgam G;
  Verifier V(G);
  EXPECT_EQ(V.run_check("index-map-lipschitz", small()).constant("L"), 2);
}

TEST(Checks, TreeBallCounts) {
  Amalgam G;
  // four short labels at each vertex: the root has 4 neighbors, every other vertex 3 new ones
  EXPECT_EQ(tree_ball(G, TreeVertex{}, 1).size(), 5u);
  EXPECT_EQ(tree_ball(G, TreeVertex{}, 2).size(), 5u + 12u);
}

TEST(Fits, LeastSquares) {
  LinearFit f = least_squares({0, 1, 2, 3}, {1, 3, 5, 7});
  EXPECT_DOUBLE_EQ(f.slope, 2);
  EXPECT_DOUBLE_EQ(f.intercept, 1);
}
