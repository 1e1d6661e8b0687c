#include <gtest/gtest.h>

#include "admissible/verifier.hpp"

using namespace admissible;

namespace {

TreeVertex v2root() { return TreeVertex{{FreeWord{}}}; }

GroupElement rnd(const Amalgam& G, std::uint64_t seed, std::size_t n = 10) {
  return random_word(G, n, seed, G.uniform_generator_measure());
}

}  // namespace

TEST(Relations, Examples) {
  Amalgam G;
  TreeVertex v1{};
  EXPECT_EQ(relation(Domain::rline(v1), Domain::hhat(v1)), Relation::Orthogonal);
  EXPECT_EQ(relation(Domain::rline(block_vertex(G.parse_word("a1 a2"))), Domain::tree()), Relation::Nested);
  EXPECT_TRUE(nests(Domain::rline(block_vertex(G.parse_word("a1 a2"))), Domain::tree()));
  EXPECT_EQ(relation(Domain::hhat(v1), Domain::hhat(block_vertex(G.parse_word("a1 a2 a1")))), Relation::Transverse);
  EXPECT_EQ(relation(Domain::rline(v2root()), Domain::hhat(v1)), Relation::Nested);
  EXPECT_EQ(relation(Domain::rline(v2root()), Domain::rline(v1)), Relation::Orthogonal);
  EXPECT_EQ(relation(Domain::tree(), Domain::tree()), Relation::Equal);
}

// every ordered pair gets exactly one relation, with the expected symmetries
TEST(Relations, ExhaustiveAndExclusiveOnTheTreeBall) {
  Amalgam G;
  auto ds = domains_of(tree_ball(G, TreeVertex{}, 4));
  for (const auto& V : ds)
    for (const auto& W : ds) {
      Relation r = relation(V, W);
      EXPECT_EQ(r == Relation::Equal, V == W);
      EXPECT_EQ(relation(W, V), r);
      if (r == Relation::Nested) EXPECT_NE(nests(V, W), nests(W, V));
      if (r != Relation::Nested) EXPECT_FALSE(nests(V, W));
      if (r == Relation::Orthogonal) EXPECT_FALSE(nests(V, W) || nests(W, V));
    }
  EXPECT_EQ(longest_chain(ds), 3u);
  EXPECT_EQ(largest_orthogonal_family(ds), 2u);
}

TEST(Projections, Examples) {
  Amalgam G;
  BoundedSet t = pi(G, Domain::tree(), G.parse_word("a1"));
  EXPECT_EQ(t.vertex, TreeVertex{});
  EXPECT_EQ(t.diameter(), 0);
  BoundedSet r = pi(G, Domain::rline(TreeVertex{}), G.parse_word("t1^5"));
  EXPECT_DOUBLE_EQ(r.fiber.lo, 5);
  EXPECT_DOUBLE_EQ(r.fiber.hi, 5);
  BoundedSet h = pi(G, Domain::hhat(TreeVertex{}), G.parse_word("a1 a2 a1"));
  EXPECT_EQ(h.hat, hat_vertex(word("aa")));
}

TEST(Projections, RhoExamples) {
  Amalgam G;
  EXPECT_EQ(rho(G, Domain::hhat(v2root()), Domain::tree()).vertex, v2root());
  EXPECT_EQ(rho(G, Domain::rline(v2root()), Domain::hhat(TreeVertex{})).hat, hat_apex(FreeWord{}));
  TreeVertex far = block_vertex(G.parse_word("a1 a2 a1"));
  ASSERT_EQ(tree_distance(TreeVertex{}, far), 2u);
  BoundedSet c = rho(G, Domain::hhat(far), Domain::hhat(TreeVertex{}));
  EXPECT_TRUE(c.hat.apex);
  EXPECT_EQ(c.hat.at, edge_label(TreeVertex{}, step_toward(TreeVertex{}, far)));
  EXPECT_THROW(rho(G, Domain::rline(TreeVertex{}), Domain::hhat(TreeVertex{})), std::invalid_argument);
}

TEST(Projections, WholeSpaceConventionNearby) {
  Amalgam G;
  BoundedSet p = pi(G, Domain::tree(), G.identity());
  BoundedSet w = rho_map(G, Domain::tree(), Domain::hhat(TreeVertex{}), p);
  EXPECT_EQ(w.kind, BoundedSet::Kind::Whole);
  EXPECT_EQ(domain_distance(G, Domain::hhat(TreeVertex{}), w, pi(G, Domain::hhat(TreeVertex{}), G.identity())), 0);
  EXPECT_TRUE(std::isinf(w.diameter()));
}

TEST(Projections, DomainDistanceExamples) {
  Amalgam G;
  Domain R = Domain::rline(TreeVertex{});
  EXPECT_EQ(domain_distance(G, R, BoundedSet::span({3, 3}), BoundedSet::span({-2, -2})), 5);
  Domain H = Domain::hhat(TreeVertex{});
  EXPECT_EQ(domain_distance(G, H, BoundedSet::point(hat_vertex({})), BoundedSet::point(hat_vertex(power(G.h(0), 10)))), 2);
  auto x = pi(G, H, G.parse_word("a1 b1 a1"));
  EXPECT_EQ(domain_distance(G, H, x, x), 0);
}

TEST(Projections, ProjectionsAreCoarselyLipschitz) {
  Amalgam G;
  for (std::uint64_t s = 0; s < 300; ++s) {
    GroupElement x = rnd(G, s);
    for (std::size_t g = 0; g < 10; ++g) EXPECT_LE(profile(G, x, G.multiply(x, G.generator(g))).max_all(), 2);
  }
}

TEST(DistanceFormula, Examples) {
  Amalgam G;
  GroupElement x = rnd(G, 1);
  EXPECT_EQ(distance_formula(G, x, x, 10), 0);
  for (int n : {11, 12, 20}) EXPECT_EQ(distance_formula(G, G.identity(), G.parse_word("t1^" + std::to_string(n)), 10), n);
  EXPECT_EQ(distance_formula(G, G.identity(), G.parse_word("t1^3"), 10), 0);
}

TEST(DistanceFormula, ProfileTermsAreDirectProjections) {
  Amalgam G;
  for (std::uint64_t s = 0; s < 300; ++s) {
    GroupElement x = rnd(G, 2 * s), y = rnd(G, 2 * s + 1);
    Profile p = profile(G, x, y);
    EXPECT_EQ(p.tree, tree_distance(index_map(x), index_map(y)));
    for (const auto& t : p.terms) EXPECT_DOUBLE_EQ(t.value, projection_distance(G, t.domain, x, y)) << t.domain.str();
    EXPECT_DOUBLE_EQ(profile(G, y, x).max_all(), p.max_all());
  }
}

TEST(HierarchyPaths, Examples) {
  Amalgam G;
  GroupElement x = G.parse_word("a1 b1 t1");
  HierarchyPath same = hierarchy_path(G, G.identity(), x);
  EXPECT_EQ(same.corners.size(), 2u);
  HierarchyPath hp = hierarchy_path(G, G.identity(), G.parse_word("a1 a2"));
  ASSERT_EQ(hp.corners.size(), 3u);
  EXPECT_EQ(G.spell(hp.corners[1]), "a1 t1");
  EXPECT_EQ(hp.shadow, tree_geodesic(TreeVertex{}, block_vertex(G.parse_word("a1 a2"))));
}

TEST(HierarchyPaths, ShadowIsTheTreeGeodesic) {
  Amalgam G;
  for (std::uint64_t s = 0; s < 200; ++s) {
    GroupElement x = rnd(G, 2 * s), y = rnd(G, 2 * s + 1);
    HierarchyPath hp = hierarchy_path(G, x, y);
    EXPECT_EQ(hp.shadow, tree_geodesic(block_vertex(x), block_vertex(y)));
    EXPECT_EQ(hp.corners.front(), x);
    EXPECT_EQ(hp.corners.back(), y);
  }
}

TEST(Centers, Examples) {
  Amalgam G;
  GroupElement x = rnd(G, 9);
  CenterResult c = center(G, x, x, x);
  EXPECT_EQ(c.eta, x);
  EXPECT_EQ(c.deviation, 0);
  CenterResult s = center(G, G.identity(), G.parse_word("t1^4"), G.parse_word("t1^-4"));
  EXPECT_EQ(s.eta, G.identity());
}

TEST(Centers, RestrictedSearchMatchesExhaustiveSearch) {
  Amalgam G;
  Ball b = ball(G, 4);
  std::vector<GroupElement> all;
  for (std::size_t i = 0; i < b.size(); ++i) all.push_back(b.element(i));
  std::mt19937_64 rng(5);
  std::size_t small = b.layer_size(0) + b.layer_size(1) + b.layer_size(2);
  for (int n = 0; n < 30; ++n) {
    GroupElement x = all[rng() % small], y = all[rng() % small], z = all[rng() % small];
    CenterResult r = center(G, x, y, z);
    CenterResult e = center_over(G, x, y, z, relevant_domains(G, {x, y, z}), all);
    EXPECT_LE(r.deviation, e.deviation) << G.spell(x) << " | " << G.spell(y) << " | " << G.spell(z);
  }
}

TEST(Clouds, BaseAndCornersAreMembers) {
  Amalgam G;
  GroupElement g = G.parse_word("a1 a2"), w;
  std::vector<GroupElement> pos{w};
  for (int i = 0; i < 24; ++i) pos.push_back(w = G.multiply(w, g));
  TreeRay ray = limit_ray(pos);
  EXPECT_TRUE(cloud_member(G, G.identity(), ray, 0));
  HierarchyPath hp = hierarchy_path(G, G.identity(), ray);
  double worst = 0;
  for (const auto& c : hp.corners) worst = std::max(worst, cloud_distance(G, c, ray));
  for (const auto& c : hp.corners) EXPECT_TRUE(cloud_member(G, c, ray, worst));
  EXPECT_LE(worst, 2);
  RayProjection p = project_to_ray(G, G.identity(), ray);
  EXPECT_LE(distance_formula(G, p.point, G.identity(), 1), 2);
}

TEST(Realization, OrthogonalPairsAreRealized) {
  Amalgam G;
  TreeVertex v{};
  GroupElement x = realize(G, {Domain::hhat(v), Domain::rline(v)},
                           {BoundedSet::point(hat_vertex(word("ab"))), BoundedSet::span({-3, -3})});
  EXPECT_EQ(pi(G, Domain::hhat(v), x).hat, hat_vertex(word("ab")));
  EXPECT_DOUBLE_EQ(pi(G, Domain::rline(v), x).fiber.mid(), -3);
  TreeVertex w = v2root();
  GroupElement y = realize(G, {Domain::rline(v), Domain::rline(w)}, {BoundedSet::span({2, 2}), BoundedSet::span({5, 5})});
  EXPECT_LE(domain_distance(G, Domain::rline(v), pi(G, Domain::rline(v), y), BoundedSet::span({2, 2})), 1);
  EXPECT_LE(domain_distance(G, Domain::rline(w), pi(G, Domain::rline(w), y), BoundedSet::span({5, 5})), 1);
}
