#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "admissible/coned.hpp"

namespace admissible {

enum class DomainKind { Tree, Hhat, Rline };

struct Domain {
  DomainKind kind = DomainKind::Tree;
  TreeVertex vertex;

  static Domain tree() { return {}; }
  static Domain hhat(TreeVertex v) { return {DomainKind::Hhat, std::move(v)}; }
  static Domain rline(TreeVertex v) { return {DomainKind::Rline, std::move(v)}; }

  bool operator==(const Domain&) const = default;
  auto operator<=>(const Domain& o) const {
    if (kind != o.kind) return kind <=> o.kind;
    return vertex <=> o.vertex;
  }
  std::string str() const {
    if (kind == DomainKind::Tree) return "T";
    return (kind == DomainKind::Hhat ? "H" : "R") + vertex.str();
  }
};

enum class Relation { Equal, Nested, Orthogonal, Transverse };

inline const char* relation_name(Relation r) {
  switch (r) {
    case Relation::Equal: return "equal";
    case Relation::Nested: return "nested";
    case Relation::Orthogonal: return "orthogonal";
    case Relation::Transverse: return "transverse";
  }
  return "?";
}

// V properly nested in W
inline bool nests(const Domain& V, const Domain& W) {
  if (V == W) return false;
  if (W.kind == DomainKind::Tree) return true;
  return V.kind == DomainKind::Rline && W.kind == DomainKind::Hhat && adjacent(V.vertex, W.vertex);
}

inline Relation relation(const Domain& V, const Domain& W) {
  if (V == W) return Relation::Equal;
  if (nests(V, W) || nests(W, V)) return Relation::Nested;
  if (V.kind == DomainKind::Tree || W.kind == DomainKind::Tree) return Relation::Transverse;
  std::size_t d = tree_distance(V.vertex, W.vertex);
  bool mixed = V.kind != W.kind;
  if (mixed && d == 0) return Relation::Orthogonal;
  if (V.kind == DomainKind::Rline && W.kind == DomainKind::Rline && d == 1) return Relation::Orthogonal;
  return Relation::Transverse;
}

struct BoundedSet {
  enum class Kind { Whole, Vertex, Fiber, Hat };
  Kind kind = Kind::Whole;
  TreeVertex vertex;
  Interval fiber;
  HatPoint hat;

  static BoundedSet whole() { return {}; }
  static BoundedSet at(TreeVertex v) { return {Kind::Vertex, std::move(v), {}, {}}; }
  static BoundedSet span(Interval i) { return {Kind::Fiber, {}, i, {}}; }
  static BoundedSet point(HatPoint p) { return {Kind::Hat, {}, {}, std::move(p)}; }

  double diameter() const {
    if (kind == Kind::Whole) return std::numeric_limits<double>::infinity();
    if (kind == Kind::Fiber) return fiber.length();
    return 0;
  }
  std::string str() const {
    switch (kind) {
      case Kind::Whole: return "*";
      case Kind::Vertex: return vertex.str();
      case Kind::Fiber: {
        std::ostringstream os;
        os << "[" << fiber.lo << "," << fiber.hi << "]";
        return os.str();
      }
      case Kind::Hat: return hat.str();
    }
    return "";
  }
};

// the interval in the fiber of w cut out by the strip at the next vertex toward `target`
inline Interval strip_toward(const Amalgam& G, const TreeVertex& w, const TreeVertex& target) {
  TreeVertex u1 = step_toward(w, target), u2 = step_toward(u1, target);
  int t = u1.type();
  return map_h_to_fiber(G, t, line_projection(G, t, edge_label(u1, u2), edge_label(u1, w)));
}

inline HatPoint apex_toward(const TreeVertex& w, const TreeVertex& target) {
  return hat_apex(edge_label(w, step_toward(w, target)));
}

inline BoundedSet pi(const Amalgam& G, const Domain& W, const GroupElement& x) {
  switch (W.kind) {
    case DomainKind::Tree: return BoundedSet::at(index_map(x));
    case DomainKind::Hhat: return BoundedSet::point(hat_vertex(gate(G, x, W.vertex).base));
    case DomainKind::Rline: return BoundedSet::span(gate(G, x, W.vertex).rcoord);
  }
  return {};
}

// rho^V_W for V nested in or transverse to W
inline BoundedSet rho(const Amalgam& G, const Domain& V, const Domain& W) {
  Relation r = relation(V, W);
  if (!(r == Relation::Transverse || (r == Relation::Nested && nests(V, W))))
    throw std::invalid_argument("rho undefined for " + V.str() + " and " + W.str());
  if (W.kind == DomainKind::Tree) return BoundedSet::at(V.vertex);
  if (W.kind == DomainKind::Hhat) return BoundedSet::point(apex_toward(W.vertex, V.vertex));
  return BoundedSet::span(strip_toward(G, W.vertex, V.vertex));
}

// rho^W_V applied to a point of CW, for V properly nested in W
inline BoundedSet rho_map(const Amalgam& G, const Domain& W, const Domain& V, const BoundedSet& p) {
  if (!nests(V, W)) throw std::invalid_argument("rho_map needs " + V.str() + " nested in " + W.str());
  if (p.kind == BoundedSet::Kind::Whole) return BoundedSet::whole();
  if (W.kind == DomainKind::Tree) {
    if (tree_distance(p.vertex, V.vertex) <= 1) return BoundedSet::whole();
    if (V.kind == DomainKind::Hhat) return BoundedSet::point(apex_toward(V.vertex, p.vertex));
    return BoundedSet::span(strip_toward(G, V.vertex, p.vertex));
  }
  int t = W.vertex.type();
  FreeWord e = edge_label(W.vertex, V.vertex);
  if (p.hat.apex) {
    if (p.hat.at == e) return BoundedSet::whole();
    return BoundedSet::span(map_h_to_fiber(G, t, line_projection(G, t, p.hat.at, e)));
  }
  double y = h_position(G, t, project_to_axis(p.hat.at, Axis{G.h(t), e}).position);
  return BoundedSet::span(map_h_to_fiber(G, t, Interval{y, y}));
}

inline double domain_distance(const Amalgam& G, const Domain& W, const BoundedSet& a, const BoundedSet& b) {
  if (a.kind == BoundedSet::Kind::Whole || b.kind == BoundedSet::Kind::Whole) return 0;
  switch (W.kind) {
    case DomainKind::Tree: return static_cast<double>(tree_distance(a.vertex, b.vertex));
    case DomainKind::Rline: return std::abs(a.fiber.mid() - b.fiber.mid());
    case DomainKind::Hhat: return static_cast<double>(hat_distance(G.h(W.vertex.type()), a.hat, b.hat));
  }
  return 0;
}

inline double union_diameter(const Amalgam& G, const Domain& W, const BoundedSet& a, const BoundedSet& b) {
  if (a.kind == BoundedSet::Kind::Whole || b.kind == BoundedSet::Kind::Whole)
    return std::numeric_limits<double>::infinity();
  if (W.kind == DomainKind::Rline) return std::max(a.fiber.hi, b.fiber.hi) - std::min(a.fiber.lo, b.fiber.lo);
  return domain_distance(G, W, a, b);
}

// Domains with nonzero contribution for a pair: T, both domains at each vertex of the tree
// geodesic, and R_w for neighbors whose line runs along the H_u-geodesic between entry sets.
struct Term {
  Domain domain;
  double value = 0;
};

struct Profile {
  std::size_t tree = 0;
  std::vector<Term> terms;  // proper domains only

  double max_proper() const {
    double m = 0;
    for (const auto& t : terms) m = std::max(m, t.value);
    return m;
  }
  double max_all() const { return std::max(max_proper(), static_cast<double>(tree)); }
};

struct GatePair {
  std::vector<TreeVertex> path;
  std::vector<Gate> from_x, from_y;
};

inline GatePair gate_pair(const Amalgam& G, const GroupElement& x, const GroupElement& y) {
  GatePair gp;
  gp.path = tree_geodesic(block_vertex(x), block_vertex(y));
  std::size_t n = gp.path.size();
  gp.from_x.push_back(gate_at_home(G, x));
  for (std::size_t i = 1; i < n; ++i) gp.from_x.push_back(gate_step(G, gp.from_x.back(), gp.path[i]));
  std::vector<Gate> back{gate_at_home(G, y)};
  for (std::size_t i = n - 1; i-- > 0;) back.push_back(gate_step(G, back.back(), gp.path[i]));
  gp.from_y.assign(back.rbegin(), back.rend());
  return gp;
}

// endpoints of the shortest H_u segment between the sets two gates present at u
inline std::pair<FreeWord, FreeWord> entry_bridge(const Amalgam& G, const TreeVertex& u, const Gate& gx, const Gate& gy) {
  const FreeWord& h = G.h(u.type());
  if (!gx.entry && !gy.entry) return {gx.base, gy.base};
  if (gx.entry && gy.entry) {
    Strip s = strip(G, u, *gx.entry, *gy.entry);
    return {s.end_first, s.end_second};
  }
  if (gx.entry) return {project_to_axis(gy.base, Axis{h, *gx.entry}).point, gy.base};
  return {gx.base, project_to_axis(gx.base, Axis{h, *gy.entry}).point};
}

inline std::set<FreeWord> lines_along(const FreeWord& h, const FreeWord& p, const FreeWord& q) {
  std::set<FreeWord> out;
  FreeWord w = mul(inverse(p), q);
  std::size_t L = h.size();
  for (std::size_t i = 0; i < w.size(); ++i) {
    FreeWord a = mul(p, prefix(w, i));
    char l = w[i];
    for (std::size_t phi = 0; phi < L; ++phi) {
      bool fwd = h[phi] == l, bwd = inverse_letter(h[(phi + L - 1) % L]) == l;
      if (fwd || bwd) out.insert(coset_rep(mul(a, inverse(prefix(h, phi))), h));
    }
  }
  return out;
}

inline Profile profile(const Amalgam& G, const GroupElement& x, const GroupElement& y) {
  Profile pr;
  GatePair gp = gate_pair(G, x, y);
  std::size_t n = gp.path.size();
  pr.tree = tree_distance(index_map(x), index_map(y));
  for (std::size_t i = 0; i < n; ++i) {
    const TreeVertex& u = gp.path[i];
    const Gate &gx = gp.from_x[i], &gy = gp.from_y[i];
    const FreeWord& h = G.h(u.type());
    pr.terms.push_back({Domain::hhat(u), static_cast<double>(hat_distance(h, gx.base, gy.base))});
    pr.terms.push_back({Domain::rline(u), std::abs(gx.rcoord.mid() - gy.rcoord.mid())});
    std::optional<FreeWord> before = i > 0 ? std::optional<FreeWord>(edge_label(u, gp.path[i - 1])) : std::nullopt;
    std::optional<FreeWord> after = i + 1 < n ? std::optional<FreeWord>(edge_label(u, gp.path[i + 1])) : std::nullopt;
    auto [p, q] = entry_bridge(G, u, gx, gy);
    for (const auto& label : lines_along(h, p, q)) {
      if (label == before || label == after) continue;
      double v = std::abs(rcoord_across(G, gx, label).mid() - rcoord_across(G, gy, label).mid());
      pr.terms.push_back({Domain::rline(neighbor(u, label)), v});
    }
  }
  return pr;
}

inline double threshold(double v, double L) { return v >= L ? v : 0; }

inline double distance_formula(const Amalgam& G, const GroupElement& x, const GroupElement& y, double L) {
  Profile p = profile(G, x, y);
  double s = static_cast<double>(p.tree);
  for (const auto& t : p.terms) s += threshold(t.value, L);
  return s;
}

// d_W(x, y) computed directly from the projections
inline double projection_distance(const Amalgam& G, const Domain& W, const GroupElement& x, const GroupElement& y) {
  return domain_distance(G, W, pi(G, W, x), pi(G, W, y));
}

struct HierarchyPath {
  std::vector<GroupElement> corners;
  std::vector<TreeVertex> shadow;
};

// x, then one corner in each boundary plane crossed by the tree geodesic, then y
inline HierarchyPath hierarchy_path(const Amalgam& G, const GroupElement& x, const GroupElement& y) {
  HierarchyPath hp;
  GatePair gp = gate_pair(G, x, y);
  hp.shadow = gp.path;
  hp.corners.push_back(x);
  for (std::size_t i = 1; i < gp.path.size(); ++i) {
    const TreeVertex &a = gp.path[i - 1], &b = gp.path[i];
    int ta = a.type(), tb = b.type();
    FreeWord out = edge_label(a, b), back = edge_label(b, a);
    double hx = h_position(G, ta, project_to_axis(gp.from_x[i - 1].base, Axis{G.h(ta), out}).position);
    double hy = h_position(G, tb, project_to_axis(gp.from_y[i].base, Axis{G.h(tb), back}).position);
    EdgeCoords cy = G.convert(EdgeCoords{hy, gp.from_y[i].fiber}, tb, ta);
    long j = std::lround(hx), k = std::lround(cy.t);
    GroupElement c = representative(G, a);
    G.right_multiply(c, ta, mul(out, power(G.h(ta), j)), k);
    hp.corners.push_back(c);
  }
  hp.corners.push_back(y);
  return hp;
}

inline HierarchyPath hierarchy_path(const Amalgam& G, const GroupElement& x, const TreeRay& ray) {
  if (ray.vertices.empty()) throw std::invalid_argument("empty ray");
  return hierarchy_path(G, x, representative(G, ray.vertices.back()));
}

inline TreeVertex tree_median(const TreeVertex& a, const TreeVertex& b, const TreeVertex& c) {
  TreeVertex m1 = truncate(a, common_depth(a, b)), m2 = truncate(a, common_depth(a, c)),
             m3 = truncate(b, common_depth(b, c));
  if (m1.depth() >= m2.depth() && m1.depth() >= m3.depth()) return m1;
  return m2.depth() >= m3.depth() ? m2 : m3;
}

inline std::vector<Domain> relevant_domains(const Amalgam& G, const std::vector<GroupElement>& pts) {
  std::set<Domain> s{Domain::tree()};
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      for (const auto& t : profile(G, pts[i], pts[j]).terms) s.insert(t.domain);
  if (pts.size() == 1) s.insert(Domain::hhat(block_vertex(pts[0]))), s.insert(Domain::rline(block_vertex(pts[0])));
  return {s.begin(), s.end()};
}

// coordinate-wise center of three projections
inline BoundedSet domain_center(const Amalgam& G, const Domain& Y, const BoundedSet& a, const BoundedSet& b,
                                const BoundedSet& c) {
  switch (Y.kind) {
    case DomainKind::Tree: return BoundedSet::at(tree_median(a.vertex, b.vertex, c.vertex));
    case DomainKind::Rline: {
      double m[3] = {a.fiber.mid(), b.fiber.mid(), c.fiber.mid()};
      std::sort(m, m + 3);
      return BoundedSet::span({m[1], m[1]});
    }
    case DomainKind::Hhat: return BoundedSet::point(hat_vertex(median(a.hat.at, b.hat.at, c.hat.at)));
  }
  (void)G;
  return {};
}

struct CenterResult {
  GroupElement eta;
  double deviation = 0;  // achieved D'
  std::size_t candidates = 0;
};

inline double center_deviation(const Amalgam& G, const std::vector<Domain>& domains,
                               const std::vector<BoundedSet>& targets, const GroupElement& eta,
                               double stop_above = std::numeric_limits<double>::infinity()) {
  double worst = 0;
  for (std::size_t i = 0; i < domains.size() && worst <= stop_above; ++i)
    worst = std::max(worst, domain_distance(G, domains[i], pi(G, domains[i], eta), targets[i]));
  return worst;
}

inline std::vector<GroupElement> block_neighborhood(const Amalgam& G, const GroupElement& c, std::size_t radius) {
  std::vector<GroupElement> out;
  long r = static_cast<long>(radius);
  for (int v : {c.last_vertex(), 1 - c.last_vertex()})
    for (const auto& f : free_ball(radius))
      for (long k = -r; k <= r; ++k) {
        if (static_cast<long>(f.size()) + std::abs(k) > r) continue;
        GroupElement y = c;
        G.right_multiply(y, v, f, k);
        out.push_back(std::move(y));
      }
  return out;
}

inline CenterResult center_over(const Amalgam& G, const GroupElement& x, const GroupElement& y,
                                const GroupElement& z, const std::vector<Domain>& domains,
                                const std::vector<GroupElement>& candidates) {
  std::vector<BoundedSet> targets;
  for (const auto& Y : domains)
    targets.push_back(domain_center(G, Y, pi(G, Y, x), pi(G, Y, y), pi(G, Y, z)));
  CenterResult best;
  best.deviation = std::numeric_limits<double>::infinity();
  std::set<std::string> seen;
  for (const auto& c : candidates) {
    if (!seen.insert(encode(c)).second) continue;
    ++best.candidates;
    double d = center_deviation(G, domains, targets, c, best.deviation);
    if (d < best.deviation) {
      best.deviation = d;
      best.eta = c;
    }
  }
  return best;
}

inline std::vector<GroupElement> center_candidates(const Amalgam& G, const GroupElement& x, const GroupElement& y,
                                                   const GroupElement& z, std::size_t radius = 2) {
  std::vector<GroupElement> base{x, y, z};
  for (auto [p, q] : {std::pair{&x, &y}, std::pair{&y, &z}, std::pair{&x, &z}})
    for (auto& c : hierarchy_path(G, *p, *q).corners) base.push_back(c);
  std::vector<GroupElement> out(base);
  for (const auto& c : base)
    for (auto& n : block_neighborhood(G, c, radius)) out.push_back(std::move(n));
  return out;
}

inline CenterResult center(const Amalgam& G, const GroupElement& x, const GroupElement& y, const GroupElement& z) {
  return center_over(G, x, y, z, relevant_domains(G, {x, y, z}), center_candidates(G, x, y, z));
}

// domains living within `radius` of a tree vertex, as a window for local center searches
inline std::vector<Domain> window_domains(const std::vector<Domain>& all, const TreeVertex& c, std::size_t radius) {
  std::vector<Domain> out;
  for (const auto& d : all)
    if (d.kind == DomainKind::Tree || tree_distance(d.vertex, c) <= radius) out.push_back(d);
  return out;
}

inline std::size_t ray_projection_index(const TreeRay& ray, const TreeVertex& v) {
  std::size_t best = 0, d = std::numeric_limits<std::size_t>::max();
  for (std::size_t i = 0; i < ray.vertices.size(); ++i) {
    std::size_t di = tree_distance(ray.vertices[i], v);
    if (di < d) d = di, best = i;
  }
  return best;
}

struct RayProjection {
  GroupElement point;
  double deviation = 0;
  std::size_t depth = 0;  // depth of the endpoint proxy
  bool stable = true;     // same answer with the proxy two steps further out
};

inline GroupElement ray_proxy(const Amalgam& G, const TreeRay& ray, std::size_t depth) {
  return representative(G, ray.vertices[std::min(depth, ray.depth())]);
}

inline CenterResult ray_center(const Amalgam& G, const GroupElement& x, const TreeRay& ray, std::size_t depth) {
  const GroupElement o = G.identity(), end = ray_proxy(G, ray, depth);
  TreeVertex b = tree_median(index_map(o), index_map(x), index_map(end));
  auto domains = window_domains(relevant_domains(G, {o, x, end}), b, 3);
  std::vector<GroupElement> base{o, x};
  for (auto [p, q] : {std::pair{&o, &x}, std::pair{&x, &end}, std::pair{&o, &end}}) {
    auto hp = hierarchy_path(G, *p, *q);
    for (std::size_t i = 0; i < hp.corners.size(); ++i)
      if (tree_distance(index_map(hp.corners[i]), b) <= 2) base.push_back(hp.corners[i]);
  }
  std::vector<GroupElement> cands(base);
  for (const auto& c : base)
    for (auto& n : block_neighborhood(G, c, 1)) cands.push_back(std::move(n));
  return center_over(G, o, x, end, domains, cands);
}

// Pi_xi(x) = center(o, x, xi) with xi replaced by a ray vertex at twice the depth of x
inline RayProjection project_to_ray(const Amalgam& G, const GroupElement& x, TreeRay ray) {
  std::size_t depth = std::max<std::size_t>(2 * tree_distance(TreeVertex{}, index_map(x)), 2);
  extend(G, ray, depth + 2);
  RayProjection r;
  r.depth = std::min(depth, ray.depth());
  CenterResult c = ray_center(G, x, ray, r.depth);
  r.point = c.eta;
  r.deviation = c.deviation;
  if (r.depth + 2 <= ray.depth()) {
    CenterResult c2 = ray_center(G, x, ray, r.depth + 2);
    r.stable = index_map(c2.eta) == index_map(c.eta);
  }
  return r;
}

// distance from z_Y to the coordinate geodesic [a_Y, b_Y]
inline double distance_to_segment(const Amalgam& G, const Domain& Y, const BoundedSet& z, const BoundedSet& a,
                                  const BoundedSet& b) {
  if (z.kind == BoundedSet::Kind::Whole) return 0;
  switch (Y.kind) {
    case DomainKind::Tree: {
      double s = static_cast<double>(tree_distance(z.vertex, a.vertex) + tree_distance(z.vertex, b.vertex)) -
                 static_cast<double>(tree_distance(a.vertex, b.vertex));
      return s / 2;
    }
    case DomainKind::Rline: {
      double lo = std::min(a.fiber.mid(), b.fiber.mid()), hi = std::max(a.fiber.mid(), b.fiber.mid());
      double m = z.fiber.mid();
      return m < lo ? lo - m : (m > hi ? m - hi : 0);
    }
    case DomainKind::Hhat: {
      FreeWord m = median(z.hat.at, a.hat.at, b.hat.at);
      return static_cast<double>(hat_distance(G.h(Y.vertex.type()), z.hat.at, m));
    }
  }
  return 0;
}

inline double cloud_distance(const Amalgam& G, const GroupElement& z, const TreeRay& ray) {
  GroupElement o = G.identity(), end = ray_proxy(G, ray, ray.depth());
  double worst = 0;
  for (const auto& Y : relevant_domains(G, {o, z, end}))
    worst = std::max(worst, distance_to_segment(G, Y, pi(G, Y, z), pi(G, Y, o), pi(G, Y, end)));
  return worst;
}

inline bool cloud_member(const Amalgam& G, const GroupElement& z, const TreeRay& ray, double D) {
  return cloud_distance(G, z, ray) <= D;
}

// realization point for an orthogonal family of size at most two, with coordinates in each domain
inline GroupElement realize(const Amalgam& G, const std::vector<Domain>& family, const std::vector<BoundedSet>& coords) {
  if (family.empty()) return G.identity();
  if (family.size() > 2) throw std::invalid_argument("orthogonal families have at most two members");
  if (family.size() == 2 && relation(family[0], family[1]) != Relation::Orthogonal)
    throw std::invalid_argument("family is not pairwise orthogonal");
  auto find = [&](DomainKind k) -> int {
    for (std::size_t i = 0; i < family.size(); ++i)
      if (family[i].kind == k) return static_cast<int>(i);
    return -1;
  };
  int ih = find(DomainKind::Hhat), ir = find(DomainKind::Rline);
  if (find(DomainKind::Tree) >= 0) {
    if (family.size() != 1) throw std::invalid_argument("T is orthogonal to nothing");
    GroupElement g = representative(G, coords[0].vertex);
    return g;
  }
  if (family.size() == 1 || ih >= 0) {
    const TreeVertex& v = family[0].vertex;
    FreeWord base = ih >= 0 ? coords[static_cast<std::size_t>(ih)].hat.at : FreeWord{};
    long fiber = ir >= 0 ? std::lround(coords[static_cast<std::size_t>(ir)].fiber.mid()) : 0;
    GroupElement g = representative(G, v);
    G.right_multiply(g, v.type(), base, fiber);
    return g;
  }
  const TreeVertex &v = family[0].vertex, &w = family[1].vertex;
  int tv = v.type();
  double cv = coords[0].fiber.mid(), cw = coords[1].fiber.mid();
  const Matrix2& M = G.gluing_from(tv);
  // M (y, cv) has t-coordinate cw in the chart of w
  double y = M[1][0] != 0 ? (cw - static_cast<double>(M[1][1]) * cv) / static_cast<double>(M[1][0]) : 0;
  GroupElement g = representative(G, v);
  G.right_multiply(g, tv, mul(edge_label(v, w), power(G.h(tv), std::lround(y))), std::lround(cv));
  return g;
}

}  // namespace admissible
