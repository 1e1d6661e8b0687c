#include <gtest/gtest.h>

#include "admissible/report.hpp"

using namespace admissible;

namespace {

RunManifest sample_manifest(const std::string& hash = "0123456789abcdef") {
  RunManifest m;
  m.config_hash = hash;
  m.command = "verify axioms";
  m.parameters = {{"radius", "4"}, {"samples", "100"}};
  m.seeds = {{"suite", "1"}};
  m.timestamp = "2001-09-09T01:46:40Z";
  return m;
}

CheckReport sample_report() {
  CheckReport r;
  r.id = "consistency-club";
  r.radius = 4;
  r.achieved_radius = 4;
  r.samples = 100;
  r.seed = 42;
  r.constants = {{"kappa0", 1}, {"ratio", 0.1}};
  r.witness = "a1 t1^-2 | Hv1[] Hv2[a,b]";
  r.note = "comma, and \"quote\"";
  return r;
}

}  // namespace

TEST(Report, NumbersRoundTrip) {
  for (double v : std::initializer_list<double>{0.0, 1.0, 0.1, -2.5, 1e-12, 123456.789, INFINITY, -INFINITY}) EXPECT_EQ(parse_num(num(v)), v);
  EXPECT_TRUE(std::isnan(parse_num(num(NAN))));
}

TEST(Report, ManifestAndRowsRoundTrip) {
  RunManifest m = sample_manifest();
  CsvDocument d = check_document(m, {sample_report()});
  CsvDocument back = parse_csv(render(d));
  EXPECT_EQ(back.manifest, m);
  EXPECT_EQ(back.schema, kCheckSchema);
  EXPECT_EQ(back.columns, check_columns());
  ASSERT_EQ(back.rows.size(), 1u);
  CheckReport r = check_from_row(back.rows[0]);
  EXPECT_EQ(r.id, "consistency-club");
  EXPECT_EQ(r.witness, sample_report().witness);
  EXPECT_EQ(r.note, sample_report().note);
  EXPECT_EQ(r.constant("ratio"), 0.1);
  EXPECT_EQ(render(back), render(d));
}

TEST(Report, TimestampHonoursSourceDateEpoch) {
  setenv("SOURCE_DATE_EPOCH", "1000000000", 1);
  EXPECT_EQ(build_timestamp(), "2001-09-09T01:46:40Z");
  unsetenv("SOURCE_DATE_EPOCH");
}

TEST(Report, MergeConcatenatesMatchingManifests) {
  CsvDocument a = check_document(sample_manifest(), {sample_report()});
  CsvDocument b = check_document(sample_manifest(), {sample_report(), sample_report()});
  CsvDocument m = merge_documents({a, b});
  EXPECT_EQ(m.rows.size(), 3u);
  EXPECT_EQ(m.manifest.command, "report merge");
  EXPECT_EQ(m.manifest.config_hash, a.manifest.config_hash);
}

TEST(Report, MergeRejectsDifferentConfigs) {
  CsvDocument a = check_document(sample_manifest("aaaaaaaaaaaaaaaa"), {sample_report()});
  CsvDocument b = check_document(sample_manifest("bbbbbbbbbbbbbbbb"), {sample_report()});
  EXPECT_THROW(merge_documents({a, b}), ManifestError);
  CsvDocument t = trend_document(sample_manifest("aaaaaaaaaaaaaaaa"), {});
  EXPECT_THROW(merge_documents({a, t}), ManifestError);
  EXPECT_THROW(merge_documents({}), ManifestError);
}

TEST(Report, PathsRoundTrip) {
  Amalgam G;
  WalkParams wp;
  wp.checkpoints = {5, 10, 20};
  auto paths = run_walks(G, G.uniform_generator_measure(), 30, 2, wp);
  CsvDocument d = path_document(sample_manifest(), paths);
  auto back = paths_from_document(parse_csv(render(d)));
  ASSERT_EQ(back.size(), paths.size());
  for (std::size_t i = 0; i < paths.size(); ++i) {
    EXPECT_EQ(back[i].seed, paths[i].seed);
    EXPECT_EQ(back[i].tree, paths[i].tree);
    EXPECT_EQ(back[i].checkpoints, paths[i].checkpoints);
    EXPECT_EQ(back[i].ray_ok, paths[i].ray_ok);
  }
  EXPECT_EQ(render(walk_document(sample_manifest(), aggregate_walks(back, 0.2))),
            render(walk_document(sample_manifest(), aggregate_walks(paths, 0.2))));
}

TEST(Report, SuiteSummaryVerdict) {
  CheckReport ok = sample_report(), bad = sample_report();
  bad.id = "complexity";
  bad.status = "fail";
  auto s = suite_summary(sample_manifest(), {ok}, {});
  EXPECT_EQ(s["verdict"], "pass");
  EXPECT_EQ(suite_summary(sample_manifest(), {ok, bad}, {})["verdict"], "fail");
  EXPECT_EQ(suite_summary(sample_manifest(), {ok}, {"complexity"})["verdict"], "fail");
  EXPECT_EQ(s["checks"]["consistency-club"]["constants"]["kappa0"], "1");
}
