#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "admissible/randwalk.hpp"

namespace admissible {

inline const std::vector<std::string>& axiom_check_ids() {
  static const std::vector<std::string> ids{
      "projection-lipschitz", "index-map-lipschitz", "complexity",        "consistency-club",
      "consistency-spade",    "consistency-diamond", "bounded-geodesic-image", "partial-realization",
      "uniqueness",           "lemma-k",             "strip-epsilon",     "line-malnormality",
      "line-covering",        "bounded-proj"};
  return ids;
}

inline const std::vector<std::string>& distance_check_ids() {
  static const std::vector<std::string> ids{"distance-formula", "hierarchy"};
  return ids;
}

inline std::vector<std::string> all_check_ids() {
  auto v = axiom_check_ids();
  for (const auto& s : distance_check_ids()) v.push_back(s);
  return v;
}

struct CheckParams {
  int radius = 4;
  std::size_t samples = 1000;
  std::uint64_t seed = 1;
  std::vector<int> sweep;  // radii for the stability trend; empty means {radius}
  double threshold = 10;   // L for distance-formula checks
  double growth_tolerance = 0.10;
};

struct Constant {
  std::string name;
  double value = 0;
};

struct TrendRow {
  int radius = 0;
  double value = 0;
  double growth = 0;
  bool flagged = false;
};

struct CheckReport {
  std::string id;
  std::string status = "pass";  // pass | partial | fail
  int radius = 0;
  int achieved_radius = 0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  std::vector<Constant> constants;
  std::string witness;
  std::vector<TrendRow> trend;
  std::string note;

  double constant(const std::string& name) const {
    for (const auto& c : constants)
      if (c.name == name) return c.value;
    throw std::out_of_range("no constant " + name + " in " + id);
  }
  void set(const std::string& name, double v) {
    for (auto& c : constants)
      if (c.name == name) {
        c.value = v;
        return;
      }
    constants.push_back({name, v});
  }
  void fail(const std::string& why) {
    status = "fail";
    note += (note.empty() ? "" : "; ") + why;
  }
};

// relative growth per step; from zero any increase is unbounded growth
inline std::vector<TrendRow> trend_table(const std::vector<std::pair<int, double>>& values, double tolerance) {
  std::vector<TrendRow> rows;
  for (std::size_t i = 0; i < values.size(); ++i) {
    TrendRow r{values[i].first, values[i].second, 0, false};
    if (i > 0) {
      double prev = values[i - 1].second, cur = values[i].second;
      int dr = std::max(1, values[i].first - values[i - 1].first);
      if (prev > 0) r.growth = (cur - prev) / prev / dr;
      else r.growth = cur > prev ? INFINITY : 0;
      r.flagged = !(r.growth <= tolerance) || !std::isfinite(cur);
    } else {
      r.flagged = !std::isfinite(values[i].second);
    }
    rows.push_back(r);
  }
  return rows;
}

inline std::string witness_pair(const Amalgam& G, const GroupElement& x, const std::string& extra) {
  return G.spell(x) + " | " + extra;
}

// vertices of T reachable from c through boundary lines with labels of length <= 1
inline std::vector<FreeWord> short_labels(const Amalgam& G, int type) {
  std::set<FreeWord> s{FreeWord{}};
  for (char l = 0; l < 4; ++l) {
    FreeWord u = coset_rep(FreeWord{std::string(1, l)}, G.h(type));
    if (u.size() <= 1) s.insert(u);
  }
  return {s.begin(), s.end()};
}

inline std::vector<TreeVertex> local_neighbors(const Amalgam& G, const TreeVertex& P) {
  std::vector<TreeVertex> out;
  for (const auto& u : short_labels(G, P.type())) out.push_back(neighbor(P, u));
  return out;
}

inline std::vector<TreeVertex> tree_ball(const Amalgam& G, const TreeVertex& c, std::size_t radius) {
  std::vector<TreeVertex> out{c};
  std::set<TreeVertex> seen{c};
  std::size_t begin = 0;
  for (std::size_t r = 0; r < radius; ++r) {
    std::size_t end = out.size();
    for (std::size_t i = begin; i < end; ++i)
      for (auto& n : local_neighbors(G, out[i]))
        if (seen.insert(n).second) out.push_back(n);
    begin = end;
  }
  return out;
}

inline std::vector<Domain> domains_of(const std::vector<TreeVertex>& vs) {
  std::vector<Domain> out{Domain::tree()};
  for (const auto& v : vs) {
    out.push_back(Domain::hhat(v));
    out.push_back(Domain::rline(v));
  }
  return out;
}

inline std::size_t longest_chain(const std::vector<Domain>& ds) {
  std::map<Domain, std::size_t> memo;
  std::function<std::size_t(const Domain&)> up = [&](const Domain& d) -> std::size_t {
    auto it = memo.find(d);
    if (it != memo.end()) return it->second;
    std::size_t best = 1;
    for (const auto& w : ds)
      if (nests(d, w)) best = std::max(best, 1 + up(w));
    return memo[d] = best;
  };
  std::size_t m = 0;
  for (const auto& d : ds) m = std::max(m, up(d));
  return m;
}

inline std::size_t largest_orthogonal_family(const std::vector<Domain>& ds) {
  std::size_t best = ds.empty() ? 0 : 1;
  for (std::size_t i = 0; i < ds.size(); ++i)
    for (std::size_t j = i + 1; j < ds.size(); ++j) {
      if (relation(ds[i], ds[j]) != Relation::Orthogonal) continue;
      best = std::max<std::size_t>(best, 2);
      for (std::size_t k = j + 1; k < ds.size(); ++k)
        if (relation(ds[i], ds[k]) == Relation::Orthogonal && relation(ds[j], ds[k]) == Relation::Orthogonal)
          best = std::max<std::size_t>(best, 3);
    }
  return best;
}

struct LinearFit {
  double slope = 0, intercept = 0;
};

inline LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  double den = n * sxx - sx * sx;
  if (den == 0) return {0, n > 0 ? sy / n : 0};
  double a = (n * sxy - sx * sy) / den;
  return {a, (sy - a * sx) / n};
}

class Verifier {
 public:
  explicit Verifier(const Amalgam& G, std::filesystem::path cache_dir = {}) : G_(G), cache_dir_(std::move(cache_dir)) {}

  const Ball& ball_of(int radius) {
    if (radius > kBallCap) throw ResourceCapError("ball radius exceeds cap");
    if (!ball_ || ball_->radius < radius) {
      int r = std::max(radius, ball_ ? ball_->radius : 0);
      if (!cache_dir_.empty())
        if (auto c = cached_radius(r))
          if (auto b = read_ball(ball_cache_path(cache_dir_, G_, *c), G_, *c)) ball_ = std::make_unique<Ball>(std::move(*b));
      if (!ball_ || ball_->radius < r)
        ball_ = std::make_unique<Ball>(cache_dir_.empty() ? ball(G_, r) : cached_ball(G_, r, cache_dir_));
    }
    return *ball_;
  }

  // largest cached ball of at least the given radius, when one exists
  std::optional<int> cached_radius(int radius) const {
    for (int c = kBallCap; c >= radius; --c)
      if (std::filesystem::exists(ball_cache_path(cache_dir_, G_, c))) return c;
    return std::nullopt;
  }

  std::size_t count_upto(int radius) {
    const Ball& b = ball_of(radius);
    std::size_t n = 0;
    for (int r = 0; r <= radius; ++r) n += b.layer_size(r);
    return n;
  }

  GroupElement draw(int radius, std::mt19937_64& rng) {
    std::size_t n = count_upto(radius);
    return ball_of(radius).element(std::uniform_int_distribution<std::size_t>(0, n - 1)(rng));
  }

  CheckReport run_check(const std::string& id, const CheckParams& p) {
    CheckReport r;
    r.id = id;
    r.radius = p.radius;
    r.achieved_radius = p.radius;
    r.samples = p.samples;
    r.seed = sub_seed(p.seed, id);
    std::vector<int> radii = p.sweep.empty() ? std::vector<int>{p.radius} : p.sweep;
    if (id == "complexity") return complexity(r, p);
    if (id == "consistency-diamond") return diamond(r, p, radii);
    if (id == "uniqueness") return uniqueness(r, p);
    if (id == "distance-formula") return distance_formula_check(r, p, radii);
    if (id == "hierarchy") return hierarchy(r, p);
    if (id == "bounded-proj") return bounded_proj(r, p);
    using Sampler = std::pair<std::string, double> (Verifier::*)(int, std::size_t, std::uint64_t, std::string&);
    static const std::map<std::string, std::pair<Sampler, std::string>> sampled{
        {"projection-lipschitz", {&Verifier::projection_lipschitz, "K"}},
        {"index-map-lipschitz", {&Verifier::index_lipschitz, "L"}},
        {"consistency-club", {&Verifier::club, "kappa0"}},
        {"consistency-spade", {&Verifier::spade, "kappa0"}},
        {"bounded-geodesic-image", {&Verifier::bgi, "E"}},
        {"partial-realization", {&Verifier::partial_realization, "alpha"}},
        {"lemma-k", {&Verifier::lemma_k, "A"}},
        {"strip-epsilon", {&Verifier::strip_epsilon, "epsilon"}},
        {"line-malnormality", {&Verifier::malnormality, "diameter"}},
        {"line-covering", {&Verifier::covering, "r"}},
    };
    auto it = sampled.find(id);
    if (it == sampled.end()) throw std::invalid_argument("unknown check id: " + id);
    std::vector<std::pair<int, double>> values;
    for (int rad : radii) {
      std::string w;
      auto [name, v] = (this->*(it->second.first))(rad, p.samples, sub_seed(r.seed, std::to_string(rad)), w);
      values.push_back({rad, v});
      if (rad == p.radius || radii.size() == 1) {
        r.set(name, v);
        r.witness = w;
      }
      if (!std::isfinite(v)) r.fail("non-finite constant at radius " + std::to_string(rad));
    }
    if (r.constants.empty()) {
      r.set(it->second.second, values.back().second);
      r.radius = values.back().first;
    }
    finish_trend(r, values, p.growth_tolerance);
    return r;
  }

  std::vector<CheckReport> run_all(const std::vector<std::string>& ids, const CheckParams& p) {
    std::vector<CheckReport> out;
    for (const auto& id : ids) out.push_back(run_check(id, p));
    return out;
  }

  std::vector<TrendRow> stability_sweep(const std::string& id, const std::vector<int>& radii, CheckParams p) {
    if (radii.empty()) return {};
    p.sweep = radii;
    p.radius = radii.front();
    return run_check(id, p).trend;
  }

  // ids expected but absent from a suite
  static std::vector<std::string> self_audit(const std::vector<CheckReport>& suite, const std::vector<std::string>& expected) {
    std::vector<std::string> missing;
    for (const auto& id : expected)
      if (std::none_of(suite.begin(), suite.end(), [&](const CheckReport& r) { return r.id == id; }))
        missing.push_back(id);
    return missing;
  }

  // sampled points and domains ----------------------------------------------------------

  std::vector<TreeVertex> hull_vertices(int radius, std::mt19937_64& rng) {
    auto path = tree_geodesic(index_map(draw(radius, rng)), index_map(draw(radius, rng)));
    return path;
  }

  TreeVertex near_hull(int radius, std::mt19937_64& rng) {
    auto path = hull_vertices(radius, rng);
    TreeVertex v = path[std::uniform_int_distribution<std::size_t>(0, path.size() - 1)(rng)];
    std::size_t hops = std::uniform_int_distribution<std::size_t>(0, 2)(rng);
    for (std::size_t i = 0; i < hops; ++i) {
      auto ns = local_neighbors(G_, v);
      v = ns[std::uniform_int_distribution<std::size_t>(0, ns.size() - 1)(rng)];
    }
    return v;
  }

  Domain random_domain(const TreeVertex& v, std::mt19937_64& rng) {
    return std::uniform_int_distribution<int>(0, 1)(rng) ? Domain::hhat(v) : Domain::rline(v);
  }

  const Amalgam& group() const { return G_; }

 private:
  void finish_trend(CheckReport& r, const std::vector<std::pair<int, double>>& values, double tol) {
    r.trend = trend_table(values, tol);
    for (const auto& t : r.trend)
      if (t.flagged) r.fail("constant grows beyond tolerance at radius " + std::to_string(t.radius));
  }

  // sup over domains of d_Y(x, x s) for a generator s
  std::pair<std::string, double> projection_lipschitz(int radius, std::size_t n, std::uint64_t seed, std::string& w) {
    std::mt19937_64 rng(seed);
    double K = 0;
    const auto& gens = G_.generators();
    for (std::size_t i = 0; i < n; ++i) {
      GroupElement x = draw(radius, rng);
      std::size_t g = std::uniform_int_distribution<std::size_t>(0, gens.size() - 1)(rng);
      GroupElement y = G_.multiply(x, G_.generator(g));
      double v = profile(G_, x, y).max_all();
      if (v > K) K = v, w = witness_pair(G_, x, gens[g].name);
    }
    return {"K", K};
  }

  std::pair<std::string, double> index_lipschitz(int radius, std::size_t n, std::uint64_t seed, std::string& w) {
    std::mt19937_64 rng(seed);
    double L = 0;
    std::size_t violations = 0;
    for (std::size_t i = 0; i < n; ++i) {
      GroupElement x = draw(radius, rng), y = draw(radius, rng);
      double dT = static_cast<double>(tree_distance(index_map(x), index_map(y)));
      std::size_t syl = G_.multiply(G_.invert(x), y).syllable_length();
      if (dT > static_cast<double>(syl) + 2) ++violations;
      GroupElement s = G_.generator(std::uniform_int_distribution<std::size_t>(0, G_.generators().size() - 1)(rng));
      double step = static_cast<double>(tree_distance(index_map(x), index_map(G_.multiply(x, s))));
      if (step > L) L = step, w = witness_pair(G_, x, G_.spell(s));
    }
    if (violations) w += " (syllable bound violated " + std::to_string(violations) + "x)";
    return {"L", violations ? INFINITY : L};
  }

  std::pair<Domain, Domain> sample_pair(int radius, std::mt19937_64& rng, bool want_nested) {
    while (true) {
      TreeVertex a = near_hull(radius, rng), b = near_hull(radius, rng);
      if (want_nested) {
        if (std::uniform_int_distribution<int>(0, 1)(rng)) return {random_domain(a, rng), Domain::tree()};
        auto ns = local_neighbors(G_, a);
        TreeVertex c = ns[std::uniform_int_distribution<std::size_t>(0, ns.size() - 1)(rng)];
        return {Domain::rline(c), Domain::hhat(a)};
      }
      Domain V = random_domain(a, rng), W = random_domain(b, rng);
      if (relation(V, W) == Relation::Transverse) return {V, W};
    }
  }

  std::pair<std::string, double> club(int radius, std::size_t n, std::uint64_t seed, std::string& w) {
    std::mt19937_64 rng(seed);
    double k0 = 0;
    for (std::size_t i = 0; i < n; ++i) {
      GroupElement x = draw(radius, rng);
      auto [V, W] = sample_pair(radius, rng, false);
      double a = domain_distance(G_, W, pi(G_, W, x), rho(G_, V, W));
      double b = domain_distance(G_, V, pi(G_, V, x), rho(G_, W, V));
      double v = std::min(a, b);
      if (v > k0) k0 = v, w = witness_pair(G_, x, V.str() + " " + W.str());
    }
    return {"kappa0", k0};
  }

  std::pair<std::string, double> spade(int radius, std::size_t n, std::uint64_t seed, std::string& w) {
    std::mt19937_64 rng(seed);
    double k0 = 0;
    for (std::size_t i = 0; i < n; ++i) {
      GroupElement x = draw(radius, rng);
      auto [V, W] = sample_pair(radius, rng, true);
      BoundedSet pw = pi(G_, W, x);
      double a = domain_distance(G_, W, pw, rho(G_, V, W));
      double b = union_diameter(G_, V, pi(G_, V, x), rho_map(G_, W, V, pw));
      double v = std::min(a, b);
      if (v > k0) k0 = v, w = witness_pair(G_, x, V.str() + " " + W.str());
    }
    return {"kappa0", k0};
  }

  std::pair<std::string, double> diamond_at(int radius, std::string& w, std::size_t& triples) {
    auto ds = domains_of(tree_ball(G_, TreeVertex{}, static_cast<std::size_t>(radius)));
    double best = 0;
    triples = 0;
    std::vector<std::pair<Domain, Domain>> chains;
    for (const auto& U : ds)
      for (const auto& V : ds)
        if (nests(U, V)) chains.push_back({U, V});
    for (const auto& [U, V] : chains)
      for (const auto& W : ds) {
        Relation vw = relation(V, W), uw = relation(U, W);
        bool applies = nests(V, W) || vw == Relation::Transverse;
        if (!applies || uw == Relation::Orthogonal || uw == Relation::Equal) continue;
        ++triples;
        double d = domain_distance(G_, W, rho(G_, U, W), rho(G_, V, W));
        if (d > best) best = d, w = U.str() + " " + V.str() + " " + W.str();
      }
    return {"kappa0", best};
  }

  CheckReport diamond(CheckReport r, const CheckParams& p, const std::vector<int>& radii) {
    std::vector<std::pair<int, double>> values;
    for (int rad : radii) {
      std::string w;
      std::size_t triples = 0;
      double v = diamond_at(rad, w, triples).second;
      values.push_back({rad, v});
      if (rad == p.radius || radii.size() == 1) {
        r.set("kappa0", v);
        r.set("triples", static_cast<double>(triples));
        r.witness = w;
        r.samples = triples;
      }
    }
    if (r.constants.empty()) r.set("kappa0", values.back().second);
    finish_trend(r, values, p.growth_tolerance);
    return r;
  }

  std::pair<std::string, double> bgi(int radius, std::size_t n, std::uint64_t seed, std::string& w) {
    std::mt19937_64 rng(seed);
    double E = 0;
    for (std::size_t i = 0; i < n; ++i) {
      auto [V, W] = sample_pair(radius, rng, true);
      std::vector<BoundedSet> gamma;
      if (W.kind == DomainKind::Tree) {
        for (auto& v : tree_geodesic(index_map(draw(radius, rng)), index_map(draw(radius, rng))))
          gamma.push_back(BoundedSet::at(v));
      } else {
        FreeWord p = gate(G_, draw(radius, rng), W.vertex).base, q = gate(G_, draw(radius, rng), W.vertex).base;
        for (auto& pt : hat_route(G_.h(W.vertex.type()), p, q, true).points) gamma.push_back(BoundedSet::point(pt));
      }
      BoundedSet target = rho(G_, V, W);
      double near = INFINITY, lo = INFINITY, hi = -INFINITY;
      bool whole = false;
      TreeVertex tv;
      std::optional<HatPoint> hp;
      double diam = 0;
      for (const auto& g : gamma) {
        near = std::min(near, domain_distance(G_, W, g, target));
        BoundedSet img = rho_map(G_, W, V, g);
        if (img.kind == BoundedSet::Kind::Whole) {
          whole = true;
          continue;
        }
        if (img.kind == BoundedSet::Kind::Fiber) {
          lo = std::min(lo, img.fiber.lo);
          hi = std::max(hi, img.fiber.hi);
          diam = hi - lo;
        } else {
          if (!hp) hp = img.hat;
          diam = std::max(diam, static_cast<double>(hat_distance(G_.h(V.vertex.type()), *hp, img.hat)) * 2);
        }
      }
      if (whole) diam = INFINITY;
      double v = std::min(diam, near);
      if (v > E) E = v, w = V.str() + " " + W.str() + " |gamma|=" + std::to_string(gamma.size());
    }
    return {"E", E};
  }

  std::pair<std::string, double> partial_realization(int radius, std::size_t n, std::uint64_t seed, std::string& w) {
    std::mt19937_64 rng(seed);
    auto words = free_ball(static_cast<std::size_t>(radius));
    double alpha = 0;
    for (std::size_t i = 0; i < n; ++i) {
      TreeVertex v = near_hull(radius, rng);
      std::vector<Domain> fam;
      std::vector<BoundedSet> coords;
      auto fiber = [&]() {
        double c = std::uniform_int_distribution<int>(-radius, radius)(rng);
        return BoundedSet::span({c, c});
      };
      if (std::uniform_int_distribution<int>(0, 1)(rng)) {
        fam = {Domain::hhat(v), Domain::rline(v)};
        coords = {BoundedSet::point(hat_vertex(words[std::uniform_int_distribution<std::size_t>(0, words.size() - 1)(rng)])),
                  fiber()};
      } else {
        auto ns = local_neighbors(G_, v);
        fam = {Domain::rline(v), Domain::rline(ns[std::uniform_int_distribution<std::size_t>(0, ns.size() - 1)(rng)])};
        coords = {fiber(), fiber()};
      }
      GroupElement x = realize(G_, fam, coords);
      double worst = 0;
      for (std::size_t j = 0; j < fam.size(); ++j)
        worst = std::max(worst, domain_distance(G_, fam[j], pi(G_, fam[j], x), coords[j]));
      for (const auto& W : domains_of(tree_ball(G_, v, 2)))
        for (const auto& V : fam) {
          Relation rel = relation(V, W);
          if (!(nests(V, W) || rel == Relation::Transverse)) continue;
          worst = std::max(worst, domain_distance(G_, W, pi(G_, W, x), rho(G_, V, W)));
        }
      if (worst > alpha) alpha = worst, w = witness_pair(G_, x, fam[0].str() + " " + fam[1].str());
    }
    return {"alpha", alpha};
  }

  // exhaustive over label triples at o of length <= radius - 3; the strip set only depends on the labels
  std::pair<std::string, double> lemma_k(int radius, std::size_t, std::uint64_t, std::string& w) {
    std::size_t len = static_cast<std::size_t>(std::max(1, radius - 3));
    struct Sample {
      double dl, diam;
      std::string what;
    };
    std::vector<Sample> samples;
    for (const TreeVertex& o : {TreeVertex{}, TreeVertex{{FreeWord{}}}}) {
      int t = o.type();
      std::set<FreeWord> reps;
      for (const auto& f : free_ball(len)) reps.insert(coset_rep(f, G_.h(t)));
      std::vector<FreeWord> labels(reps.begin(), reps.end());
      std::vector<GroupElement> pts;
      for (const auto& u : labels) {
        TreeVertex P = neighbor(o, u);
        GroupElement g = representative(G_, P);
        G_.right_multiply(g, P.type(), FreeWord{std::string(1, kA)}, 0);
        pts.push_back(g);
      }
      for (std::size_t k = 0; k < labels.size(); ++k) {
        Domain R = Domain::rline(neighbor(o, labels[k]));
        std::vector<std::optional<Interval>> proj(labels.size()), set(labels.size());
        for (std::size_t i = 0; i < labels.size(); ++i) {
          if (i == k || !(block_vertex(pts[i]) == neighbor(o, labels[i]))) continue;
          proj[i] = line_projection(G_, t, labels[i], labels[k]);
          set[i] = pi(G_, R, pts[i]).fiber;
        }
        for (std::size_t i = 0; i < labels.size(); ++i)
          for (std::size_t j = i; j < labels.size(); ++j) {
            if (!proj[i] || !proj[j]) continue;
            double diam = std::max(set[i]->hi, set[j]->hi) - std::min(set[i]->lo, set[j]->lo);
            double dl = std::max(proj[i]->hi, proj[j]->hi) - std::min(proj[i]->lo, proj[j]->lo);
            samples.push_back({dl, diam, o.str() + " " + labels[i].str() + " " + labels[j].str() + " -> " + labels[k].str()});
          }
      }
    }
    // diam <= a d + b, then A = max(a, b)
    double a = 0, b = 0;
    for (const auto& s : samples)
      if (s.dl >= 1) a = std::max(a, s.diam / s.dl);
    for (const auto& s : samples)
      if (s.diam - a * s.dl > b) b = s.diam - a * s.dl, w = s.what;
    double A = std::max(a, b);
    if (w.empty())
      for (const auto& s : samples)
        if (s.dl >= 1 && s.diam / s.dl == a) {
          w = s.what;
          break;
        }
    return {"A", A};
  }

  std::pair<std::string, double> strip_epsilon(int radius, std::size_t n, std::uint64_t seed, std::string& w) {
    std::mt19937_64 rng(seed);
    const FreeWord& h = G_.h(0);
    auto lines = boundary_lines(G_, TreeVertex{}, static_cast<std::size_t>(radius));
    double eps = 0;
    long span = 2 * radius + 2 * static_cast<long>(h.size());
    for (std::size_t i = 0; i < n; ++i) {
      const auto& l1 = lines[std::uniform_int_distribution<std::size_t>(0, lines.size() - 1)(rng)];
      const auto& l2 = lines[std::uniform_int_distribution<std::size_t>(0, lines.size() - 1)(rng)];
      if (l1.label == l2.label) continue;
      Strip s = strip(G_, TreeVertex{}, l1.label, l2.label);
      auto dist_to_union = [&](const FreeWord& z) {
        std::size_t a = project_to_axis(z, l1.axis).distance, b = project_to_axis(z, l2.axis).distance;
        std::size_t c = (tree_distance(z, s.end_first) + tree_distance(z, s.end_second) -
                         tree_distance(s.end_first, s.end_second)) / 2;
        return std::min({a, b, c});
      };
      auto random_point = [&]() -> FreeWord {
        int which = std::uniform_int_distribution<int>(0, 2)(rng);
        long pos = std::uniform_int_distribution<long>(-span, span)(rng);
        if (which == 0) return axis_vertex(l1.axis, pos);
        if (which == 1) return axis_vertex(l2.axis, pos);
        FreeWord g = mul(inverse(s.end_first), s.end_second);
        return mul(s.end_first, prefix(g, std::uniform_int_distribution<std::size_t>(0, g.size())(rng)));
      };
      FreeWord p = random_point(), q = random_point();
      FreeWord g = mul(inverse(p), q);
      for (std::size_t k = 0; k <= g.size(); ++k) {
        double d = static_cast<double>(dist_to_union(mul(p, prefix(g, k))));
        if (d > eps) eps = d, w = l1.label.str() + " " + l2.label.str();
      }
    }
    if (w.empty()) w = "every bridge geodesic stays on the two lines and the bridge";
    return {"epsilon", eps};
  }

  std::pair<std::string, double> malnormality(int radius, std::size_t n, std::uint64_t seed, std::string& w) {
    std::mt19937_64 rng(seed);
    const FreeWord& h = G_.h(0);
    auto lines = boundary_lines(G_, TreeVertex{}, static_cast<std::size_t>(radius));
    auto nbhd = free_ball(2);
    double worst = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto& l1 = lines[std::uniform_int_distribution<std::size_t>(0, lines.size() - 1)(rng)];
      const auto& l2 = lines[std::uniform_int_distribution<std::size_t>(0, lines.size() - 1)(rng)];
      if (l1.label == l2.label) continue;
      auto [lo, hi] = line_projection_letters(h, l2.label, l1.label);
      std::vector<FreeWord> pts;
      for (long pos = lo - 6; pos <= hi + 6; ++pos) {
        FreeWord a = axis_vertex(l1.axis, pos);
        for (const auto& s : nbhd) {
          FreeWord z = mul(a, s);
          if (project_to_axis(z, l1.axis).distance <= 2 && project_to_axis(z, l2.axis).distance <= 2) pts.push_back(z);
        }
      }
      double d = 0;
      for (std::size_t a = 0; a < pts.size(); ++a)
        for (std::size_t b = a + 1; b < pts.size(); ++b) d = std::max(d, static_cast<double>(tree_distance(pts[a], pts[b])));
      if (d > worst) worst = d, w = l1.label.str() + " " + l2.label.str();
    }
    return {"diameter", worst};
  }

  std::pair<std::string, double> covering(int radius, std::size_t, std::uint64_t, std::string& w) {
    double r = 0;
    for (int t = 0; t < 2; ++t) {
      double v = static_cast<double>(covering_constant(G_, t, static_cast<std::size_t>(radius)));
      if (v > r) r = v, w = "v" + std::to_string(t + 1);
    }
    if (w.empty()) w = "every vertex lies on a boundary line";
    return {"r", r};
  }

  CheckReport complexity(CheckReport r, const CheckParams& p) {
    auto ds = domains_of(tree_ball(G_, TreeVertex{}, static_cast<std::size_t>(p.radius)));
    std::size_t chain = longest_chain(ds);
    r.set("complexity", static_cast<double>(chain));
    r.set("domains", static_cast<double>(ds.size()));
    r.samples = ds.size();
    r.witness = "R" + TreeVertex{{FreeWord{}}}.str() + " < H" + TreeVertex{}.str() + " < T";
    if (chain != 3) r.fail("longest nesting chain is " + std::to_string(chain));
    return r;
  }

  // smallest length beyond which every ball element has some domain with d_V(e, y) >= k
  CheckReport uniqueness(CheckReport r, const CheckParams& p) {
    int R = std::min(kBallCap, std::max(p.radius, 6));
    const Ball& b = ball_of(R);
    std::size_t n = count_upto(R);
    std::vector<double> top(n);
    for (std::size_t i = 0; i < n; ++i) top[i] = profile(G_, G_.identity(), b.element(i)).max_all();
    r.radius = R;
    r.achieved_radius = R;
    r.samples = n;
    bool partial = false;
    for (int k : {5, 10, 20}) {
      int worst = -1;
      std::size_t wi = 0;
      for (std::size_t i = 0; i < n; ++i)
        if (top[i] < k && b.length[i] > worst) worst = b.length[i], wi = i;
      double theta = worst + 1;
      r.set("theta_" + std::to_string(k), theta);
      if (worst >= R) {
        partial = true;
        r.note += (r.note.empty() ? "" : "; ") + std::string("theta(") + std::to_string(k) + ") exceeds radius " +
                  std::to_string(R) + " (witness " + G_.spell(b.element(wi)) + ")";
      }
    }
    if (partial) r.status = "partial";
    return r;
  }

  CheckReport distance_formula_check(CheckReport r, const CheckParams& p, const std::vector<int>& radii) {
    std::vector<std::pair<int, double>> values;
    for (int rad : radii) {
      const Ball& b = ball_of(rad);
      std::size_t n = count_upto(rad);
      std::vector<double> len, df;
      for (std::size_t i = 1; i < n; ++i) {
        len.push_back(b.length[i]);
        df.push_back(distance_formula(G_, G_.identity(), b.element(i), p.threshold));
      }
      LinearFit f = least_squares(df, len);
      std::vector<double> rel;
      double C = 0, K = 0;
      for (std::size_t i = 0; i < len.size(); ++i) {
        double res = len[i] - (f.slope * df[i] + f.intercept);
        C = std::max(C, std::abs(res));
        rel.push_back(std::abs(res) / len[i]);
      }
      K = f.slope > 0 ? std::max(f.slope, 1 / f.slope) : INFINITY;
      double q95 = quantile(rel, 0.95);
      values.push_back({rad, q95});
      if (rad == p.radius || radii.size() == 1) {
        r.set("slope", f.slope);
        r.set("intercept", f.intercept);
        r.set("K", K);
        r.set("C", C);
        r.set("residual_q95", q95);
        r.samples = len.size();
      }
    }
    if (r.constants.empty()) r.set("residual_q95", values.back().second);
    r.trend = trend_table(values, p.growth_tolerance);
    if (!std::isfinite(r.constant("residual_q95")) || r.constants.size() < 2 || !std::isfinite(r.constant("K")))
      r.fail("quasi-isometry constants not finite");
    return r;
  }

  // pairs in the ball with every proper projection at most E
  CheckReport hierarchy(CheckReport r, const CheckParams& p) {
    const double E = 8;
    int R = std::min(kBallCap, std::max(p.radius, 6));
    const Ball& b = ball_of(R);
    std::size_t n = count_upto(R);
    std::vector<double> lx, ly;
    double c = 0;
    std::size_t used = 0;
    for (std::size_t i = 1; i < n; ++i) {
      Profile pr = profile(G_, G_.identity(), b.element(i));
      if (pr.max_proper() > E) continue;
      ++used;
      double dT = static_cast<double>(pr.tree);
      c = std::max(c, b.length[i] / (std::max(dT, 1.0) * E * E * E));
      if (dT >= 1) {
        lx.push_back(std::log(dT));
        ly.push_back(std::log(static_cast<double>(b.length[i])));
      }
    }
    LinearFit f = least_squares(lx, ly);
    std::size_t violations = 0;
    for (std::size_t i = 1; i < n; ++i) {
      Profile pr = profile(G_, G_.identity(), b.element(i));
      if (pr.max_proper() > E) continue;
      if (b.length[i] > c * std::max(static_cast<double>(pr.tree), 1.0) * E * E * E + 1e-9) ++violations;
    }
    r.radius = R;
    r.samples = used;
    r.set("E", E);
    r.set("exponent", f.slope);
    r.set("c", c);
    r.set("violations", static_cast<double>(violations));
    if (f.slope > 1) r.fail("log-log exponent above 1");
    if (violations) r.fail("envelope violations");
    return r;
  }

  // x leaves the ray through a walk excursion; d_T(pi x, ray) bounds d(x, gamma) from below, |s| bounds d(x, y) above
  CheckReport bounded_proj(CheckReport r, const CheckParams& p) {
    const double D1 = 0.5;
    const std::size_t rays = 10;
    std::mt19937_64 rng(r.seed);
    Measure mu = G_.uniform_generator_measure();
    std::vector<double> jumps;
    std::vector<std::string> what;
    std::vector<double> lx, ly;
    std::size_t attempts = 0;
    for (std::size_t k = 0; k < rays; ++k) {
      SamplePath path = sample(G_, mu, 160, sub_seed(r.seed, "ray:" + std::to_string(k)));
      TreeRay ray;
      try {
        ray = path_ray(path, path.steps);
      } catch (const NotStabilized&) {
        continue;
      }
      HierarchyPath hp = hierarchy_path(G_, G_.identity(), ray);
      std::size_t want = (k + 1) * p.samples / rays;
      while (jumps.size() < want && attempts < 50 * p.samples) {
        ++attempts;
        const GroupElement& c = hp.corners[std::uniform_int_distribution<std::size_t>(0, hp.corners.size() - 1)(rng)];
        std::size_t m = std::uniform_int_distribution<std::size_t>(4, 4 + 4 * static_cast<std::size_t>(p.radius))(rng);
        GroupElement x = G_.multiply(c, random_word(G_, m, rng(), mu));
        std::size_t ix = ray_projection_index(ray, index_map(x));
        double dxg = static_cast<double>(tree_distance(ray.vertices[ix], index_map(x)));
        std::size_t len = static_cast<std::size_t>(std::floor(D1 * dxg));
        if (len == 0 || ix + 2 >= ray.vertices.size()) continue;
        GroupElement y = G_.multiply(x, random_word(G_, std::uniform_int_distribution<std::size_t>(1, len)(rng), rng(), mu));
        std::size_t iy = ray_projection_index(ray, index_map(y));
        jumps.push_back(std::abs(static_cast<double>(ix) - static_cast<double>(iy)));
        what.push_back(witness_pair(G_, x, G_.spell(y)));
      }
      // spread of the projection of x and a neighbor of x, against the distance of x from o
      SamplePath off = sample(G_, mu, 32, sub_seed(r.seed, "off:" + std::to_string(k)));
      for (std::size_t n : {4u, 8u, 16u, 32u}) {
        const GroupElement& x = off.positions[n];
        double norm = static_cast<double>(tree_distance(TreeVertex{}, index_map(x)));
        if (norm < 3) continue;
        GroupElement xp = G_.multiply(x, G_.generator(std::uniform_int_distribution<std::size_t>(0, G_.generators().size() - 1)(rng)));
        RayProjection pa = project_to_ray(G_, x, ray), pb = project_to_ray(G_, xp, ray);
        lx.push_back(std::log(std::log(norm)));
        ly.push_back(std::log(1 + profile(G_, pa.point, pb.point).max_all()));
      }
    }
    std::size_t half = jumps.size() / 2;
    double D2 = 0;
    for (std::size_t i = 0; i < half; ++i)
      if (jumps[i] > D2) D2 = jumps[i], r.witness = what[i];
    std::size_t violations = 0;
    for (std::size_t i = half; i < jumps.size(); ++i)
      if (jumps[i] > D2) {
        if (!violations) r.witness = what[i];
        ++violations;
      }
    LinearFit f = least_squares(lx, ly);
    r.samples = jumps.size();
    r.set("D1", D1);
    r.set("D2", D2);
    r.set("violations", static_cast<double>(violations));
    r.set("spread_exponent", f.slope);
    r.set("spread_samples", static_cast<double>(lx.size()));
    if (r.witness.empty() && !what.empty()) r.witness = what.front();
    if (violations) r.fail("held-out samples exceed the fitted D2");
    if (f.slope > 3) r.fail("projected spread grows faster than log^3");
    if (jumps.size() < p.samples) r.fail("only " + std::to_string(jumps.size()) + " qualifying samples");
    return r;
  }

  const Amalgam& G_;
  std::filesystem::path cache_dir_;
  std::unique_ptr<Ball> ball_;
};

}  // namespace admissible
