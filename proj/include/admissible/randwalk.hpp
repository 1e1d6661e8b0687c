#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include "admissible/hhs.hpp"

namespace admissible {

class MeasureError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline void check_measure(const Measure& mu) {
  if (mu.support.empty()) throw MeasureError("empty support");
  if (mu.support.size() != mu.probability.size()) throw MeasureError("support and probabilities differ in size");
  double s = 0;
  for (double p : mu.probability) {
    if (!(p > 0)) throw MeasureError("probabilities must be positive");
    s += p;
  }
  if (std::abs(s - 1) > 1e-9) throw MeasureError("probabilities must sum to 1");
}

inline Measure point_mass(const GroupElement& g, std::string label) { return {{g}, {std::move(label)}, {1.0}}; }

enum class MeasureClass { Elliptic, Lineal, NonElementary };

inline const char* measure_class_name(MeasureClass c) {
  switch (c) {
    case MeasureClass::Elliptic: return "elliptic";
    case MeasureClass::Lineal: return "lineal";
    case MeasureClass::NonElementary: return "non-elementary";
  }
  return "?";
}

inline GroupElement group_power(const Amalgam& G, const GroupElement& g, long n) {
  GroupElement base = n < 0 ? G.invert(g) : g, r;
  for (long i = 0; i < std::abs(n); ++i) r = G.multiply(r, base);
  return r;
}

inline long translation_length(const Amalgam& G, const GroupElement& g) {
  TreeVertex o;
  long d1 = static_cast<long>(tree_distance(o, index_map(g)));
  long d2 = static_cast<long>(tree_distance(o, index_map(G.multiply(g, g))));
  return d2 - d1;
}

// g^N and k^N head to the same end of T when their shared prefix keeps growing with N
inline bool same_end(const Amalgam& G, const GroupElement& g, const GroupElement& k) {
  auto cd = [&](long n) { return common_depth(index_map(group_power(G, g, n)), index_map(group_power(G, k, n))); };
  return cd(12) > cd(6);
}

inline bool same_axis(const Amalgam& G, const GroupElement& g, const GroupElement& k) {
  GroupElement gi = G.invert(g), ki = G.invert(k);
  return (same_end(G, g, k) && same_end(G, gi, ki)) || (same_end(G, g, ki) && same_end(G, gi, k));
}

// products of at most two support elements, searched for loxodromics with distinct axes
inline MeasureClass classify(const Amalgam& G, const Measure& mu) {
  std::vector<GroupElement> cand(mu.support);
  for (const auto& a : mu.support)
    for (const auto& b : mu.support) cand.push_back(G.multiply(a, b));
  std::vector<GroupElement> lox;
  for (const auto& g : cand)
    if (translation_length(G, g) > 0) {
      for (const auto& k : lox)
        if (!same_axis(G, g, k)) return MeasureClass::NonElementary;
      if (lox.size() < 4) lox.push_back(g);
    }
  return lox.empty() ? MeasureClass::Elliptic : MeasureClass::Lineal;
}

struct SamplePath {
  std::uint64_t seed = 0;
  std::size_t steps = 0;
  std::vector<std::size_t> increments;
  std::vector<GroupElement> positions;  // w_0 ... w_n
  std::vector<TreeVertex> indices;      // pi(w_i)
};

inline SamplePath sample(const Amalgam& G, const Measure& mu, std::size_t n, std::uint64_t seed) {
  check_measure(mu);
  SamplePath p;
  p.seed = seed;
  p.steps = n;
  std::mt19937_64 rng(seed);
  std::discrete_distribution<std::size_t> pick(mu.probability.begin(), mu.probability.end());
  GroupElement w;
  p.positions.push_back(w);
  p.indices.push_back(index_map(w));
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t d = pick(rng);
    p.increments.push_back(d);
    w = G.multiply(w, mu.support[d]);
    p.indices.push_back(index_map(w));
    p.positions.push_back(w);
  }
  return p;
}

inline TreeRay path_ray(const SamplePath& p, std::size_t upto) {
  std::vector<GroupElement> pos(p.positions.begin(), p.positions.begin() + static_cast<long>(upto) + 1);
  return limit_ray(pos);
}

inline std::size_t stabilization_depth(const SamplePath& p, std::size_t upto) {
  try {
    return path_ray(p, upto).depth();
  } catch (const NotStabilized&) {
    return 0;
  }
}

// DF proxy from w to the nearest corner of the hierarchy path toward the ray, over corners near the shadow
inline double tracking_distance(const Amalgam& G, const GroupElement& w, const TreeRay& ray,
                                const HierarchyPath& hp, double L) {
  std::size_t i = ray_projection_index(ray, index_map(w));
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < hp.corners.size(); ++c) {
    std::size_t j = std::min(c, hp.shadow.size() - 1);
    if (j + 2 < i || j > i + 2) continue;
    best = std::min(best, distance_formula(G, w, hp.corners[c], L));
  }
  return best;
}

struct PathStats {
  std::uint64_t seed = 0;
  std::vector<std::size_t> checkpoints;
  std::vector<double> tree;         // d_T(o, w_n)
  std::vector<double> sup_proper;   // sup over proper hull domains of d_Y(o, w_n)
  std::vector<double> tracking;     // DF proxy to the limit hierarchy path, divided by n
  std::vector<std::size_t> stabilized;
  std::size_t ray_depth = 0;
  bool ray_ok = true;
};

struct WalkParams {
  std::vector<std::size_t> checkpoints{100, 200, 400};
  std::size_t horizon_factor = 2;  // the limit ray is read from a path this many times longer
  double threshold = 10;
};

inline PathStats path_stats(const Amalgam& G, const Measure& mu, std::uint64_t seed, const WalkParams& wp) {
  std::size_t nmax = *std::max_element(wp.checkpoints.begin(), wp.checkpoints.end());
  SamplePath p = sample(G, mu, nmax * wp.horizon_factor, seed);
  PathStats s;
  s.seed = seed;
  s.checkpoints = wp.checkpoints;
  GroupElement o;
  std::optional<TreeRay> ray;
  std::optional<HierarchyPath> hp;
  try {
    ray = path_ray(p, p.steps);
    hp = hierarchy_path(G, o, *ray);
    s.ray_depth = ray->depth();
  } catch (const NotStabilized&) {
    s.ray_ok = false;
  }
  for (std::size_t n : wp.checkpoints) {
    const GroupElement& w = p.positions[n];
    s.tree.push_back(static_cast<double>(tree_distance(TreeVertex{}, p.indices[n])));
    s.sup_proper.push_back(profile(G, o, w).max_proper());
    double tr = std::numeric_limits<double>::quiet_NaN();
    if (ray) tr = tracking_distance(G, w, *ray, *hp, wp.threshold) / static_cast<double>(n);
    s.tracking.push_back(tr);
    s.stabilized.push_back(stabilization_depth(p, n));
  }
  return s;
}

// nearest-rank quantile
inline double quantile(std::vector<double> v, double q) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  std::size_t k = static_cast<std::size_t>(std::ceil(q * static_cast<double>(v.size())));
  return v[std::min(v.size() - 1, k == 0 ? 0 : k - 1)];
}

inline double mean(const std::vector<double>& v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

struct DriftSummary {
  std::vector<std::size_t> checkpoints;
  std::vector<double> mean_rate, p01_rate, exceedance;  // exceedance: fraction with rate >= l
  double l = 0;
};

inline DriftSummary drift_stats(const std::vector<PathStats>& paths, double l) {
  if (paths.size() < 30) throw std::invalid_argument("drift statistics need at least 30 paths");
  DriftSummary d;
  d.l = l;
  d.checkpoints = paths[0].checkpoints;
  for (std::size_t c = 0; c < d.checkpoints.size(); ++c) {
    std::vector<double> r;
    for (const auto& p : paths) r.push_back(p.tree[c] / static_cast<double>(d.checkpoints[c]));
    d.mean_rate.push_back(mean(r));
    d.p01_rate.push_back(quantile(r, 0.01));
    d.exceedance.push_back(static_cast<double>(std::count_if(r.begin(), r.end(), [&](double x) { return x >= l; })) /
                           static_cast<double>(r.size()));
  }
  return d;
}

struct LogProjectionSummary {
  std::vector<std::size_t> checkpoints;
  std::vector<double> C;         // 95% quantile of sup_Y / log n
  std::vector<double> coverage;  // fraction of paths under C log n
  std::vector<double> drift;     // |C_k / C_{k-1} - 1|, first entry 0
};

inline LogProjectionSummary log_projection_stats(const std::vector<PathStats>& paths, double q = 0.95) {
  LogProjectionSummary s;
  s.checkpoints = paths.at(0).checkpoints;
  for (std::size_t c = 0; c < s.checkpoints.size(); ++c) {
    double ln = std::log(static_cast<double>(s.checkpoints[c]));
    std::vector<double> r;
    for (const auto& p : paths) r.push_back(p.sup_proper[c] / ln);
    double C = quantile(r, q);
    s.C.push_back(C);
    s.coverage.push_back(static_cast<double>(std::count_if(r.begin(), r.end(), [&](double x) { return x <= C; })) /
                         static_cast<double>(r.size()));
    s.drift.push_back(c == 0 || s.C[c - 1] == 0 ? (c == 0 ? 0 : (C == 0 ? 0 : INFINITY)) : std::abs(C / s.C[c - 1] - 1));
  }
  return s;
}

struct TrackingSummary {
  std::vector<std::size_t> checkpoints;
  std::vector<double> mean_proxy;
  std::size_t unstabilized = 0;
};

inline TrackingSummary tracking_stats(const std::vector<PathStats>& paths) {
  TrackingSummary t;
  t.checkpoints = paths.at(0).checkpoints;
  for (const auto& p : paths) t.unstabilized += p.ray_ok ? 0 : 1;
  for (std::size_t c = 0; c < t.checkpoints.size(); ++c) {
    std::vector<double> v;
    for (const auto& p : paths)
      if (p.ray_ok && std::isfinite(p.tracking[c])) v.push_back(p.tracking[c]);
    t.mean_proxy.push_back(mean(v));
  }
  return t;
}

inline std::uint64_t path_seed(std::uint64_t seed, std::size_t i) { return sub_seed(seed, "path:" + std::to_string(i)); }

inline std::vector<PathStats> run_walks(const Amalgam& G, const Measure& mu, std::size_t paths, std::uint64_t seed,
                                        const WalkParams& wp) {
  if (classify(G, mu) == MeasureClass::Elliptic) throw MeasureError("measure is elementary: no loxodromic element on T");
  std::vector<PathStats> out;
  for (std::size_t i = 0; i < paths; ++i) out.push_back(path_stats(G, mu, path_seed(seed, i), wp));
  return out;
}

}  // namespace admissible
