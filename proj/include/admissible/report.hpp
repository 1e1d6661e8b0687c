#pragma once

#include <charconv>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "admissible/verifier.hpp"

namespace admissible {

inline constexpr const char* kToolVersion = "admissible 0.1.0";
inline constexpr const char* kCheckSchema = "admissible.checks/1";
inline constexpr const char* kTrendSchema = "admissible.trend/1";
inline constexpr const char* kPathSchema = "admissible.paths/1";
inline constexpr const char* kWalkSchema = "admissible.walk/1";

class ManifestError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

inline double parse_num(const std::string& s) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return INFINITY;
  if (s == "-inf") return -INFINITY;
  return std::stod(s);
}

inline std::string build_timestamp() {
  std::time_t t = std::time(nullptr);
  if (const char* e = std::getenv("SOURCE_DATE_EPOCH"); e && *e) t = static_cast<std::time_t>(std::stoll(e));
  char buf[32];
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct RunManifest {
  std::string config_hash;
  std::string command;
  std::map<std::string, std::string> parameters;
  std::map<std::string, std::string> seeds;
  std::string tool_version = kToolVersion;
  std::string timestamp;

  bool operator==(const RunManifest&) const = default;

  std::vector<std::pair<std::string, std::string>> fields() const {
    std::vector<std::pair<std::string, std::string>> f{
        {"config_hash", config_hash}, {"command", command}, {"tool_version", tool_version}, {"timestamp", timestamp}};
    for (const auto& [k, v] : parameters) f.push_back({"param." + k, v});
    for (const auto& [k, v] : seeds) f.push_back({"seed." + k, v});
    return f;
  }

  std::string header() const {
    std::string out;
    for (const auto& [k, v] : fields()) out += "# " + k + " = " + v + "\n";
    return out;
  }

  void set(const std::string& key, const std::string& value) {
    if (key == "config_hash") config_hash = value;
    else if (key == "command") command = value;
    else if (key == "tool_version") tool_version = value;
    else if (key == "timestamp") timestamp = value;
    else if (key.rfind("param.", 0) == 0) parameters[key.substr(6)] = value;
    else if (key.rfind("seed.", 0) == 0) seeds[key.substr(5)] = value;
    else throw ManifestError("unknown manifest key " + key);
  }

  nlohmann::json json() const {
    nlohmann::json j;
    j["config_hash"] = config_hash;
    j["command"] = command;
    j["tool_version"] = tool_version;
    j["timestamp"] = timestamp;
    j["parameters"] = parameters;
    j["seeds"] = seeds;
    return j;
  }
};

struct CsvDocument {
  RunManifest manifest;
  std::string schema;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::vector<std::string> csv_split(const std::string& line) {
  std::vector<std::string> out(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') out.back() += '"', ++i;
      else if (c == '"') quoted = false;
      else out.back() += c;
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.emplace_back();
    } else {
      out.back() += c;
    }
  }
  return out;
}

inline std::string render(const CsvDocument& d) {
  std::string out = d.manifest.header();
  out += "# schema = " + d.schema + "\n";
  auto line = [](const std::vector<std::string>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + csv_field(v[i]);
    return s + "\n";
  };
  out += line(d.columns);
  for (const auto& r : d.rows) out += line(r);
  return out;
}

inline CsvDocument parse_csv(const std::string& text) {
  CsvDocument d;
  std::istringstream in(text);
  std::string line;
  bool have_columns = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.rfind("# ", 0) == 0) {
      auto eq = line.find(" = ");
      if (eq == std::string::npos) throw ManifestError("malformed manifest line: " + line);
      std::string key = line.substr(2, eq - 2), value = line.substr(eq + 3);
      if (key == "schema") d.schema = value;
      else d.manifest.set(key, value);
      continue;
    }
    if (!have_columns) {
      d.columns = csv_split(line);
      have_columns = true;
    } else {
      d.rows.push_back(csv_split(line));
    }
  }
  if (d.schema.empty()) throw ManifestError("missing schema line");
  return d;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// write to a sibling temporary and rename into place
inline void write_file(const std::filesystem::path& p, const std::string& content) {
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  auto tmp = p;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
  }
  std::filesystem::rename(tmp, p);
}

inline std::string constants_field(const CheckReport& r) {
  std::string s;
  for (const auto& c : r.constants) s += (s.empty() ? "" : ";") + c.name + "=" + num(c.value);
  return s;
}

inline std::vector<Constant> parse_constants(const std::string& s) {
  std::vector<Constant> out;
  std::istringstream in(s);
  std::string item;
  while (std::getline(in, item, ';')) {
    auto eq = item.find('=');
    if (eq == std::string::npos) throw ManifestError("malformed constant " + item);
    out.push_back({item.substr(0, eq), parse_num(item.substr(eq + 1))});
  }
  return out;
}

inline const std::vector<std::string>& check_columns() {
  static const std::vector<std::string> c{"id", "status", "radius", "achieved_radius", "samples", "seed",
                                          "constants", "witness", "note"};
  return c;
}

inline std::vector<std::string> check_row(const CheckReport& r) {
  return {r.id, r.status, std::to_string(r.radius), std::to_string(r.achieved_radius), std::to_string(r.samples),
          std::to_string(r.seed), constants_field(r), r.witness, r.note};
}

inline CheckReport check_from_row(const std::vector<std::string>& row) {
  if (row.size() != check_columns().size()) throw ManifestError("check row has " + std::to_string(row.size()) + " fields");
  CheckReport r;
  r.id = row[0];
  r.status = row[1];
  r.radius = std::stoi(row[2]);
  r.achieved_radius = std::stoi(row[3]);
  r.samples = std::stoull(row[4]);
  r.seed = std::stoull(row[5]);
  r.constants = parse_constants(row[6]);
  r.witness = row[7];
  r.note = row[8];
  return r;
}

inline CsvDocument check_document(const RunManifest& m, const std::vector<CheckReport>& reports) {
  CsvDocument d{m, kCheckSchema, check_columns(), {}};
  for (const auto& r : reports) d.rows.push_back(check_row(r));
  return d;
}

inline CsvDocument trend_document(const RunManifest& m, const std::vector<CheckReport>& reports) {
  CsvDocument d{m, kTrendSchema, {"id", "radius", "value", "growth", "flagged"}, {}};
  for (const auto& r : reports)
    for (const auto& t : r.trend)
      d.rows.push_back({r.id, std::to_string(t.radius), num(t.value), num(t.growth), t.flagged ? "1" : "0"});
  return d;
}

inline nlohmann::json suite_summary(const RunManifest& m, const std::vector<CheckReport>& reports,
                                    const std::vector<std::string>& missing) {
  nlohmann::json j;
  j["manifest"] = m.json();
  j["schema"] = kCheckSchema;
  nlohmann::json checks = nlohmann::json::object();
  std::size_t failed = 0;
  for (const auto& r : reports) {
    nlohmann::json c;
    c["status"] = r.status;
    nlohmann::json k = nlohmann::json::object();
    for (const auto& x : r.constants) k[x.name] = num(x.value);
    c["constants"] = k;
    checks[r.id] = c;
    failed += r.status == "fail";
  }
  j["checks"] = checks;
  j["missing"] = missing;
  j["failed"] = failed;
  j["verdict"] = failed || !missing.empty() ? "fail" : "pass";
  return j;
}

// concatenated rows; every manifest must share the config hash and every schema must agree
inline CsvDocument merge_documents(const std::vector<CsvDocument>& docs) {
  if (docs.empty()) throw ManifestError("nothing to merge");
  CsvDocument out = docs.front();
  out.rows.clear();
  out.manifest.command = "report merge";
  for (std::size_t i = 0; i < docs.size(); ++i) {
    const auto& d = docs[i];
    if (d.manifest.config_hash != docs.front().manifest.config_hash)
      throw ManifestError("config hash mismatch: " + d.manifest.config_hash + " vs " + docs.front().manifest.config_hash);
    if (d.schema != docs.front().schema) throw ManifestError("schema mismatch: " + d.schema + " vs " + docs.front().schema);
    if (d.columns != docs.front().columns) throw ManifestError("column mismatch in input " + std::to_string(i));
    out.manifest.parameters["source." + std::to_string(i)] = d.manifest.command;
    for (const auto& [k, v] : d.manifest.seeds) out.manifest.seeds[k + "." + std::to_string(i)] = v;
    out.rows.insert(out.rows.end(), d.rows.begin(), d.rows.end());
  }
  return out;
}

inline const std::vector<std::string>& path_columns() {
  static const std::vector<std::string> c{"path", "seed", "n", "tree", "sup_proper", "tracking", "stabilized",
                                          "ray_ok", "ray_depth"};
  return c;
}

inline CsvDocument path_document(const RunManifest& m, const std::vector<PathStats>& paths) {
  CsvDocument d{m, kPathSchema, path_columns(), {}};
  for (std::size_t i = 0; i < paths.size(); ++i) {
    const auto& p = paths[i];
    for (std::size_t c = 0; c < p.checkpoints.size(); ++c)
      d.rows.push_back({std::to_string(i), std::to_string(p.seed), std::to_string(p.checkpoints[c]), num(p.tree[c]),
                        num(p.sup_proper[c]), num(p.tracking[c]), std::to_string(p.stabilized[c]),
                        p.ray_ok ? "1" : "0", std::to_string(p.ray_depth)});
  }
  return d;
}

inline std::vector<PathStats> paths_from_document(const CsvDocument& d) {
  if (d.schema != kPathSchema) throw ManifestError("expected schema " + std::string(kPathSchema) + ", got " + d.schema);
  std::vector<PathStats> out;
  for (const auto& row : d.rows) {
    if (row.size() != path_columns().size()) throw ManifestError("path row has wrong arity");
    std::size_t i = std::stoull(row[0]);
    if (i == out.size()) {
      out.emplace_back();
      out.back().seed = std::stoull(row[1]);
      out.back().ray_ok = row[7] == "1";
      out.back().ray_depth = std::stoull(row[8]);
    } else if (i + 1 != out.size()) {
      throw ManifestError("path rows out of order");
    }
    auto& p = out.back();
    p.checkpoints.push_back(std::stoull(row[2]));
    p.tree.push_back(parse_num(row[3]));
    p.sup_proper.push_back(parse_num(row[4]));
    p.tracking.push_back(parse_num(row[5]));
    p.stabilized.push_back(std::stoull(row[6]));
  }
  return out;
}

struct WalkAggregate {
  DriftSummary drift;
  LogProjectionSummary logproj;
  TrackingSummary tracking;
};

inline WalkAggregate aggregate_walks(const std::vector<PathStats>& paths, double l) {
  return {drift_stats(paths, l), log_projection_stats(paths), tracking_stats(paths)};
}

inline CsvDocument walk_document(const RunManifest& m, const WalkAggregate& a) {
  CsvDocument d{m,
                kWalkSchema,
                {"n", "drift_mean", "drift_p01", "exceedance", "log_C", "log_coverage", "log_C_drift", "tracking_mean"},
                {}};
  for (std::size_t c = 0; c < a.drift.checkpoints.size(); ++c)
    d.rows.push_back({std::to_string(a.drift.checkpoints[c]), num(a.drift.mean_rate[c]), num(a.drift.p01_rate[c]),
                      num(a.drift.exceedance[c]), num(a.logproj.C[c]), num(a.logproj.coverage[c]),
                      num(a.logproj.drift[c]), num(a.tracking.mean_proxy[c])});
  return d;
}

}  // namespace admissible
