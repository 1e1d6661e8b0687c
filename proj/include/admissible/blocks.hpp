#pragma once

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <vector>

#include "admissible/tree.hpp"

namespace admissible {

struct BlockPoint {
  TreeVertex vertex;
  FreeWord base;
  long fiber = 0;
  bool operator==(const BlockPoint&) const = default;
};

inline BlockPoint locate(const Amalgam& G, const GroupElement& x) {
  return {block_vertex(x), G.last_free_word(x), x.k};
}

inline GroupElement embed(const Amalgam& G, const BlockPoint& p) {
  GroupElement g = representative(G, p.vertex);
  G.right_multiply(g, p.vertex.type(), p.base, p.fiber);
  return g;
}

struct BoundaryLine {
  TreeVertex owner;
  TreeVertex across;  // the adjacent vertex sharing the plane
  FreeWord label;
  Axis axis;
};

inline BoundaryLine boundary_line(const Amalgam& G, const TreeVertex& P, const FreeWord& label) {
  return {P, neighbor(P, label), label, Axis{G.h(P.type()), label}};
}

inline std::vector<BoundaryLine> boundary_lines(const Amalgam& G, const TreeVertex& P, std::size_t radius) {
  if (radius > static_cast<std::size_t>(kBallCap)) throw ResourceCapError("boundary line radius exceeds cap");
  std::set<FreeWord> reps;
  for (const auto& w : free_ball(radius)) {
    FreeWord u = coset_rep(w, G.h(P.type()));
    if (u.size() <= radius) reps.insert(u);
  }
  std::vector<BoundaryLine> out;
  for (const auto& u : reps) out.push_back(boundary_line(G, P, u));
  return out;
}

// max over the radius-ball of H_v of the distance to the nearest boundary line
inline std::size_t covering_constant(const Amalgam& G, int type, std::size_t radius) {
  const FreeWord& h = G.h(type);
  std::set<FreeWord> labels;
  for (const auto& w : free_ball(radius)) {
    FreeWord u = coset_rep(w, h);
    if (u.size() <= radius) labels.insert(u);
  }
  std::size_t worst = 0;
  for (const auto& w : free_ball(radius)) {
    std::size_t best = w.size();
    for (std::size_t phi = 0; phi < h.size() && best > 0; ++phi)
      if (labels.count(coset_rep(mul(w, inverse(prefix(h, phi))), h))) best = 0;
    for (auto it = labels.begin(); best > 0 && it != labels.end(); ++it)
      best = std::min(best, project_to_axis(w, Axis{h, *it}).distance);
    worst = std::max(worst, best);
  }
  return worst;
}

// h-unit position along the line with the given label, so that label * h^y sits at y
inline double h_position(const Amalgam& G, int type, long letter_position) {
  return static_cast<double>(letter_position) / static_cast<double>(G.h(type).size());
}

inline FreeWord point_on_line(const Amalgam& G, int type, const FreeWord& label, double y) {
  long q = static_cast<long>(std::floor(y * static_cast<double>(G.h(type).size()) + 0.5));
  return axis_vertex(Axis{G.h(type), label}, q);
}

struct Interval {
  double lo = 0, hi = 0;
  double mid() const { return (lo + hi) / 2; }
  double length() const { return hi - lo; }
};

// letter-position interval on line `to` onto which the line `from` projects
inline std::pair<long, long> line_projection_letters(const FreeWord& h, const FreeWord& from, const FreeWord& to) {
  if (from == to) throw std::invalid_argument("projection of a line onto itself");
  long N = static_cast<long>(mul(inverse(to), from).size()) + 3;
  Axis target{h, to};
  long a = project_to_axis(mul(from, power(h, N)), target).position;
  long b = project_to_axis(mul(from, power(h, -N)), target).position;
  return {std::min(a, b), std::max(a, b)};
}

inline Interval line_projection(const Amalgam& G, int type, const FreeWord& from, const FreeWord& to) {
  auto [a, b] = line_projection_letters(G.h(type), from, to);
  return {h_position(G, type, a), h_position(G, type, b)};
}

struct Strip {
  TreeVertex owner;
  FreeWord first, second;      // labels of the two boundary lines
  FreeWord end_first, end_second;  // bridge endpoints
  std::size_t width = 0;       // bridge length, 0 when the lines meet
  Interval on_first, on_second;    // h-unit sets where the strip meets each plane
};

inline Strip strip(const Amalgam& G, const TreeVertex& P, const FreeWord& first, const FreeWord& second) {
  if (first == second) throw std::invalid_argument("strip between a line and itself");
  const FreeWord& h = G.h(P.type());
  int t = P.type();
  Strip s;
  s.owner = P;
  s.first = first;
  s.second = second;
  auto [a1, b1] = line_projection_letters(h, second, first);
  auto [a2, b2] = line_projection_letters(h, first, second);
  s.on_first = {h_position(G, t, a1), h_position(G, t, b1)};
  s.on_second = {h_position(G, t, a2), h_position(G, t, b2)};
  long m1 = a1 + (b1 - a1) / 2, m2 = a2 + (b2 - a2) / 2;
  s.end_first = axis_vertex(Axis{h, first}, m1);
  s.end_second = axis_vertex(Axis{h, second}, m2);
  s.width = tree_distance(s.end_first, s.end_second);
  if (a1 != b1) s.width = 0;
  return s;
}

inline Strip strip(const Amalgam& G, const TreeVertex& a, const TreeVertex& owner, const TreeVertex& b) {
  if (!adjacent(a, owner) || !adjacent(b, owner)) throw std::invalid_argument("strip edges do not share a vertex");
  return strip(G, owner, edge_label(owner, a), edge_label(owner, b));
}

struct PlaneLine {
  TreeVertex owner, across;
  Interval owner_h;   // owner-chart h positions (the line runs along the owner's fiber)
  Interval across_t;  // the same set read as the adjacent block's fiber coordinate
};

inline Interval map_h_to_fiber(const Amalgam& G, int from, Interval y) {
  EdgeCoords a = G.convert(EdgeCoords{y.lo, 0}, from, 1 - from);
  EdgeCoords b = G.convert(EdgeCoords{y.hi, 0}, from, 1 - from);
  return {std::min(a.t, b.t), std::max(a.t, b.t)};
}

inline PlaneLine strip_plane_intersection(const Amalgam& G, const Strip& s, const FreeWord& label) {
  if (label != s.first && label != s.second) throw std::invalid_argument("edge is not a side of the strip");
  PlaneLine p;
  p.owner = s.owner;
  p.across = neighbor(s.owner, label);
  p.owner_h = label == s.first ? s.on_first : s.on_second;
  p.across_t = map_h_to_fiber(G, s.owner.type(), p.owner_h);
  return p;
}

// g * rep(P) = rep(Q) * (f, k) with (f, k) in the vertex group of Q
struct LocalAction {
  TreeVertex target;
  FreeWord free;
  long fiber = 0;
};

inline LocalAction local_action(const Amalgam& G, const GroupElement& g, const TreeVertex& P) {
  GroupElement gp = G.multiply(g, representative(G, P));
  TreeVertex Q = vertex_of(gp, P.type());
  GroupElement rest = G.multiply(G.invert(representative(G, Q)), gp);
  int v = P.type();
  auto c = G.convert(rest.j, rest.k, rest.last_vertex(), v);
  FreeWord u = rest.syllables.empty() ? FreeWord{} : rest.syllables.back().rep;
  return {Q, mul(u, power(G.h(v), c.first)), c.second};
}

// A point of the model carried toward another block by nearest-point steps.
struct Gate {
  TreeVertex at;
  FreeWord base;
  double fiber = 0;
  std::optional<FreeWord> entry;  // label of the line toward pi(x) when pi(x) != at
  Interval rcoord;                // set read in the fiber quasi-line of `at`
};

inline Gate gate_at_home(const Amalgam& G, const GroupElement& x) {
  BlockPoint p = locate(G, x);
  double f = static_cast<double>(p.fiber);
  return {p.vertex, p.base, f, std::nullopt, {f, f}};
}

inline Gate gate_step(const Amalgam& G, const Gate& g, const TreeVertex& next) {
  int a = g.at.type(), b = next.type();
  FreeWord out = edge_label(g.at, next);
  Gate r;
  r.at = next;
  r.entry = edge_label(next, g.at);
  AxisProjection pr = project_to_axis(g.base, Axis{G.h(a), out});
  double y = h_position(G, a, pr.position);
  EdgeCoords c = G.convert(EdgeCoords{y, g.fiber}, a, b);
  r.base = point_on_line(G, b, *r.entry, c.h);
  r.fiber = c.t;
  if (g.entry)
    r.rcoord = map_h_to_fiber(G, a, line_projection(G, a, *g.entry, out));
  else
    r.rcoord = {c.t, c.t};
  return r;
}

inline Gate gate(const Amalgam& G, const GroupElement& x, const TreeVertex& target) {
  Gate g = gate_at_home(G, x);
  while (!(g.at == target)) g = gate_step(G, g, step_toward(g.at, target));
  return g;
}

// fiber quasi-line coordinate set of the gated point for the line with the given label at g.at
inline Interval rcoord_across(const Amalgam& G, const Gate& g, const FreeWord& label) {
  int a = g.at.type();
  if (g.entry) {
    if (*g.entry == label) return {-INFINITY, INFINITY};
    return map_h_to_fiber(G, a, line_projection(G, a, *g.entry, label));
  }
  double y = h_position(G, a, project_to_axis(g.base, Axis{G.h(a), label}).position);
  double t = G.convert(EdgeCoords{y, g.fiber}, a, 1 - a).t;
  return {t, t};
}

}  // namespace admissible
