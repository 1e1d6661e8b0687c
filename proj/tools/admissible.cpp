#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

#include "admissible/report.hpp"

using namespace admissible;

namespace {

constexpr int kExitPass = 0, kExitFail = 1, kExitUsage = 2;

std::filesystem::path cache_dir() {
  const char* e = std::getenv("ADMISSIBLE_CACHE_DIR");
  return e && *e ? std::filesystem::path(e) : std::filesystem::path(".admissible-cache");
}

GraphOfGroupsConfig load_config(const std::string& path) {
  if (path.empty()) return GraphOfGroupsConfig::ck2();
  return parse_config(read_file(path));
}

RunManifest manifest_for(const Amalgam& G, const std::string& command) {
  RunManifest m;
  m.config_hash = G.config().hash();
  m.command = command;
  m.timestamp = build_timestamp();
  return m;
}

std::vector<int> parse_radii(const std::string& s) {
  std::vector<int> out;
  std::istringstream in(s);
  std::string item;
  while (std::getline(in, item, ','))
    if (!trim(item).empty()) out.push_back(std::stoi(item));
  return out;
}

std::string join_ints(const std::vector<int>& v) {
  std::string s;
  for (int x : v) s += (s.empty() ? "" : ",") + std::to_string(x);
  return s;
}

Measure parse_measure(const Amalgam& G, const std::string& text) {
  if (text == "uniform") return G.uniform_generator_measure();
  Measure mu;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    mu.support.push_back(G.parse_word(item));
    mu.labels.push_back(item);
  }
  for (std::size_t i = 0; i < mu.support.size(); ++i) mu.probability.push_back(1.0 / static_cast<double>(mu.support.size()));
  return mu;
}

int group_build(const std::string& config_path, int radius) {
  GraphOfGroupsConfig cfg = load_config(config_path);
  auto violations = validate(cfg);
  if (!violations.empty()) {
    std::cerr << "config rejected:\n";
    for (const auto& v : violations) std::cerr << "  - " << v << "\n";
    return kExitUsage;
  }
  Amalgam G(cfg);
  Ball b = cached_ball(G, radius, cache_dir());
  std::cout << "config " << cfg.name << " hash " << cfg.hash() << ": admissibility checks pass\n";
  std::cout << "generating set " << G.generating_set() << "\n";
  for (int r = 0; r <= radius; ++r) std::cout << "sphere " << r << ": " << b.layer_size(r) << "\n";
  std::cout << "ball cache " << ball_cache_path(cache_dir(), G, radius).string() << "\n";
  return kExitPass;
}

struct VerifyOptions {
  std::string config;
  int radius = 4;
  std::size_t samples = 1000;
  std::uint64_t seed = 1;
  std::string sweep = "4,5,6";
  std::string out = "verify-out";
  double threshold = 10;
};

int verify(const std::string& suite, const VerifyOptions& o) {
  Amalgam G(load_config(o.config));
  CheckParams p;
  p.radius = o.radius;
  p.samples = o.samples;
  p.seed = o.seed;
  p.sweep = parse_radii(o.sweep);
  p.threshold = o.threshold;
  int need = o.radius;
  for (int r : p.sweep) need = std::max(need, r);
  if (suite == "distance-formula" || suite == "axioms") need = std::max(need, std::min(kBallCap, 6));
  Verifier V(G, cache_dir());
  if (!V.cached_radius(need)) {
    std::cerr << "ball cache missing for radius " << need << " in " << cache_dir().string()
              << "; run: admissible group build --radius " << need << "\n";
    return kExitUsage;
  }
  const auto& ids = suite == "axioms" ? axiom_check_ids() : distance_check_ids();
  RunManifest m = manifest_for(G, "verify " + suite);
  m.parameters = {{"radius", std::to_string(o.radius)}, {"samples", std::to_string(o.samples)},
                  {"sweep", join_ints(p.sweep)}, {"threshold", num(o.threshold)}};
  m.seeds = {{"suite", std::to_string(o.seed)}};
  std::vector<CheckReport> reports;
  std::filesystem::path dir(o.out);
  for (const auto& id : ids) {
    CheckReport r = V.run_check(id, p);
    std::cout << r.id << ": " << r.status << " " << constants_field(r) << (r.note.empty() ? "" : "  (" + r.note + ")")
              << "\n";
    write_file(dir / (id + ".csv"), render(check_document(m, {r})));
    reports.push_back(std::move(r));
  }
  auto missing = Verifier::self_audit(reports, ids);
  write_file(dir / "checks.csv", render(check_document(m, reports)));
  write_file(dir / "trend.csv", render(trend_document(m, reports)));
  auto summary = suite_summary(m, reports, missing);
  write_file(dir / "summary.json", summary.dump(2) + "\n");
  std::cout << "suite " << suite << ": " << summary["verdict"].get<std::string>() << " (" << reports.size()
            << " checks, " << missing.size() << " missing)\n";
  return summary["verdict"] == "pass" ? kExitPass : kExitFail;
}

struct WalkOptions {
  std::string config;
  std::size_t paths = 500;
  std::size_t steps = 400;
  std::uint64_t seed = 7;
  std::string measure = "uniform";
  std::string out = "walk-out";
  double l = 0.25;
};

int walk_run(const WalkOptions& o) {
  Amalgam G(load_config(o.config));
  Measure mu = parse_measure(G, o.measure);
  check_measure(mu);
  WalkParams wp;
  wp.checkpoints = {o.steps / 4, o.steps / 2, o.steps};
  if (o.steps < 4) throw std::invalid_argument("--steps must be at least 4");
  RunManifest m = manifest_for(G, "walk run");
  m.parameters = {{"paths", std::to_string(o.paths)}, {"steps", std::to_string(o.steps)}, {"measure", o.measure},
                  {"horizon_factor", std::to_string(wp.horizon_factor)}, {"threshold", num(wp.threshold)},
                  {"l", num(o.l)}};
  m.seeds = {{"walk", std::to_string(o.seed)}};
  std::cout << "measure class: " << measure_class_name(classify(G, mu)) << "\n";
  auto paths = run_walks(G, mu, o.paths, o.seed, wp);
  std::filesystem::path dir(o.out);
  write_file(dir / "paths.csv", render(path_document(m, paths)));
  WalkAggregate a = aggregate_walks(paths, o.l);
  write_file(dir / "aggregate.csv", render(walk_document(m, a)));
  for (const auto& row : walk_document(m, a).rows) {
    std::cout << "n=" << row[0] << " drift_mean=" << row[1] << " drift_p01=" << row[2] << " log_C=" << row[4]
              << " tracking=" << row[7] << "\n";
  }
  return kExitPass;
}

int walk_analyze(const std::string& file, double l, const std::string& out) {
  CsvDocument d = parse_csv(read_file(file));
  auto paths = paths_from_document(d);
  RunManifest m = d.manifest;
  m.command = "walk analyze";
  m.parameters["l"] = num(l);
  WalkAggregate a = aggregate_walks(paths, l);
  CsvDocument doc = walk_document(m, a);
  std::string text = render(doc);
  if (out.empty()) std::cout << text;
  else write_file(out, text);
  return kExitPass;
}

int report_merge(const std::vector<std::string>& files, const std::string& out) {
  std::vector<CsvDocument> docs;
  for (const auto& f : files) docs.push_back(parse_csv(read_file(f)));
  std::string text = render(merge_documents(docs));
  if (out.empty()) std::cout << text;
  else write_file(out, text);
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Experiments on an admissible group as a hierarchically hyperbolic space"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  auto* group = app.add_subcommand("group", "group configuration and ball cache");
  group->require_subcommand(1);
  auto* build = group->add_subcommand("build", "validate a config and cache the word-metric ball");
  std::string config_path;
  int radius = 6;
  build->add_option("--config", config_path, "graph-of-groups config file (default: built-in CK2)");
  build->add_option("--radius", radius, "ball radius")->check(CLI::Range(0, kBallCap));

  auto* ver = app.add_subcommand("verify", "run verifier suites");
  ver->require_subcommand(1);
  VerifyOptions vo;
  auto add_verify = [&](CLI::App* c) {
    c->add_option("--config", vo.config, "config file");
    c->add_option("--radius", vo.radius, "sample radius")->check(CLI::Range(1, kBallCap));
    c->add_option("--samples", vo.samples, "samples per radius");
    c->add_option("--seed", vo.seed, "suite seed");
    c->add_option("--sweep", vo.sweep, "comma-separated radii for stability trends");
    c->add_option("--threshold", vo.threshold, "distance-formula threshold L");
    c->add_option("--out", vo.out, "output directory");
  };
  auto* axioms = ver->add_subcommand("axioms", "axiom and lemma checks");
  auto* dfs = ver->add_subcommand("distance-formula", "distance-formula regression and hierarchy check");
  add_verify(axioms);
  add_verify(dfs);

  auto* walk = app.add_subcommand("walk", "random walks");
  walk->require_subcommand(1);
  WalkOptions wo;
  auto* run = walk->add_subcommand("run", "simulate sample paths");
  run->add_option("--config", wo.config, "config file");
  run->add_option("--paths", wo.paths, "number of paths");
  run->add_option("--steps", wo.steps, "path length n; checkpoints at n/4, n/2, n");
  run->add_option("--seed", wo.seed, "walk seed");
  run->add_option("--measure", wo.measure, "'uniform' or comma-separated support words");
  run->add_option("--drift", wo.l, "drift level for the exceedance column");
  run->add_option("--out", wo.out, "output directory");
  auto* analyze = walk->add_subcommand("analyze", "aggregate a paths.csv");
  std::string paths_file, analyze_out;
  double analyze_l = 0.25;
  analyze->add_option("paths", paths_file, "paths.csv from walk run")->required();
  analyze->add_option("--drift", analyze_l, "drift level for the exceedance column");
  analyze->add_option("--out", analyze_out, "output file (default: stdout)");

  auto* report = app.add_subcommand("report", "report utilities");
  report->require_subcommand(1);
  auto* merge = report->add_subcommand("merge", "concatenate CSV reports with matching manifests");
  std::vector<std::string> merge_files;
  std::string merge_out;
  merge->add_option("files", merge_files, "CSV files")->required();
  merge->add_option("--out", merge_out, "output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (*build) return group_build(config_path, radius);
    if (*axioms) return verify("axioms", vo);
    if (*dfs) return verify("distance-formula", vo);
    if (*run) return walk_run(wo);
    if (*analyze) return walk_analyze(paths_file, analyze_l, analyze_out);
    if (*merge) return report_merge(merge_files, merge_out);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ManifestError& e) {
    std::cerr << "manifest error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const MeasureError& e) {
    std::cerr << "measure error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  }
  return kExitUsage;
}
