#include <gtest/gtest.h>

#include "admissible/randwalk.hpp"
#include "oracles.hpp"

using namespace admissible;

TEST(Measures, Validation) {
  Amalgam G;
  EXPECT_NO_THROW(check_measure(G.uniform_generator_measure()));
  EXPECT_THROW(check_measure(Measure{}), MeasureError);
  Measure m = point_mass(G.parse_word("a1"), "a1");
  m.probability = {0.5};
  EXPECT_THROW(check_measure(m), MeasureError);
  m.probability = {-1};
  EXPECT_THROW(check_measure(m), MeasureError);
}

TEST(Measures, Classification) {
  Amalgam G;
  EXPECT_EQ(classify(G, G.uniform_generator_measure()), MeasureClass::NonElementary);
  EXPECT_EQ(classify(G, point_mass(G.parse_word("t1"), "t1")), MeasureClass::Elliptic);
  EXPECT_EQ(classify(G, point_mass(G.parse_word("a1 a2"), "a1a2")), MeasureClass::Lineal);
  EXPECT_EQ(translation_length(G, G.parse_word("a1 a2")), 2);
  EXPECT_EQ(translation_length(G, G.parse_word("a1")), 0);
}

TEST(Walks, RejectElementaryMeasures) {
  Amalgam G;
  WalkParams wp;
  wp.checkpoints = {4, 8};
  EXPECT_THROW(run_walks(G, point_mass(G.parse_word("t1"), "t1"), 30, 1, wp), MeasureError);
}

TEST(Walks, PositionsAreProductsOfIncrements) {
  Amalgam G;
  Measure mu = G.uniform_generator_measure();
  SamplePath p = sample(G, mu, 60, 3);
  ASSERT_EQ(p.positions.size(), 61u);
  for (std::size_t i = 1; i <= p.steps; ++i) {
    EXPECT_EQ(p.positions[i], G.multiply(p.positions[i - 1], mu.support[p.increments[i - 1]]));
    EXPECT_EQ(p.indices[i], index_map(p.positions[i]));
  }
}

TEST(Walks, SamplingIsDeterministic) {
  Amalgam G;
  Measure mu = G.uniform_generator_measure();
  EXPECT_EQ(sample(G, mu, 50, 9).increments, sample(G, mu, 50, 9).increments);
  EXPECT_NE(sample(G, mu, 50, 9).increments, sample(G, mu, 50, 10).increments);
}

TEST(Walks, StabilizationDepthGrowsAlongAPath) {
  Amalgam G;
  Measure mu = G.uniform_generator_measure();
  std::size_t grew = 0, total = 40;
  for (std::uint64_t s = 0; s < total; ++s) {
    SamplePath p = sample(G, mu, 400, path_seed(7, s));
    grew += stabilization_depth(p, 400) > stabilization_depth(p, 100);
  }
  EXPECT_GE(grew, total * 9 / 10);
}

TEST(Statistics, NearestRankQuantile) {
  std::mt19937_64 rng(1);
  for (int n = 1; n < 60; ++n) {
    std::vector<double> v;
    for (int i = 0; i < n; ++i) v.push_back(static_cast<double>(rng() % 100));
    for (double q : {0.0, 0.01, 0.25, 0.5, 0.95, 1.0}) EXPECT_EQ(quantile(v, q), oracle::nearest_rank(v, q)) << n << " " << q;
  }
  EXPECT_TRUE(std::isnan(quantile({}, 0.5)));
  EXPECT_EQ(mean({1, 2, 3}), 2);
}

TEST(Statistics, SummariesOverPaths) {
  Amalgam G;
  WalkParams wp;
  wp.checkpoints = {10, 20, 40};
  auto paths = run_walks(G, G.uniform_generator_measure(), 40, 3, wp);
  ASSERT_EQ(paths.size(), 40u);
  DriftSummary d = drift_stats(paths, 0.2);
  ASSERT_EQ(d.mean_rate.size(), 3u);
  for (std::size_t c = 0; c < 3; ++c) {
    EXPECT_LE(d.p01_rate[c], d.mean_rate[c]);
    EXPECT_GE(d.exceedance[c], 0);
    EXPECT_LE(d.exceedance[c], 1);
  }
  LogProjectionSummary lp = log_projection_stats(paths);
  for (double c : lp.coverage) EXPECT_GE(c, 0.95);
  EXPECT_EQ(lp.drift[0], 0);
  EXPECT_THROW(drift_stats(std::vector<PathStats>(paths.begin(), paths.begin() + 10), 0.2), std::invalid_argument);
  auto again = run_walks(G, G.uniform_generator_measure(), 40, 3, wp);
  for (std::size_t i = 0; i < paths.size(); ++i) {
    EXPECT_EQ(again[i].tree, paths[i].tree);
    EXPECT_EQ(again[i].sup_proper, paths[i].sup_proper);
  }
}
