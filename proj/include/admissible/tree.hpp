#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "admissible/amalgam.hpp"

namespace admissible {

// A vertex of the Bass-Serre tree, stored as the edge path from v1.  Token i
// lives in the vertex group of type i % 2; token 0 may be trivial (the edge
// v1 -- v2), later tokens are nontrivial coset representatives.
struct TreeVertex {
  std::vector<FreeWord> path;

  int type() const { return static_cast<int>(path.size() % 2); }
  std::size_t depth() const { return path.size(); }
  bool is_root() const { return path.empty(); }
  TreeVertex parent() const { return {std::vector<FreeWord>(path.begin(), path.end() - 1)}; }
  TreeVertex child(const FreeWord& u) const {
    TreeVertex c = *this;
    c.path.push_back(u);
    return c;
  }
  bool operator==(const TreeVertex&) const = default;
  auto operator<=>(const TreeVertex& o) const {
    if (path.size() != o.path.size()) return path.size() <=> o.path.size();
    return path <=> o.path;
  }
  std::string str() const {
    std::string s = "v" + std::to_string(type() + 1) + "[";
    for (std::size_t i = 0; i < path.size(); ++i) s += (i ? "," : "") + path[i].str();
    return s + "]";
  }
};

// coset x * G_v
inline TreeVertex vertex_of(const GroupElement& x, int v) {
  std::vector<Syllable> s = x.syllables;
  if (!s.empty() && s.back().vertex == v) s.pop_back();
  TreeVertex P;
  if (!s.empty() && s.front().vertex == 1) P.path.push_back({});
  for (auto& y : s) P.path.push_back(std::move(y.rep));
  if (s.empty() && v == 1) P.path.push_back({});
  return P;
}

// the block a point lives in
inline TreeVertex block_vertex(const GroupElement& x) { return vertex_of(x, x.last_vertex()); }

// x * v1; equivariant on the nose, and within one edge of block_vertex(x)
inline TreeVertex index_map(const GroupElement& x) { return vertex_of(x, 0); }

inline GroupElement representative(const Amalgam& G, const TreeVertex& P) {
  GroupElement g;
  for (std::size_t i = 0; i < P.path.size(); ++i) G.right_multiply(g, static_cast<int>(i % 2), P.path[i], 0);
  return g;
}

inline TreeVertex act(const Amalgam& G, const GroupElement& g, const TreeVertex& P) {
  return vertex_of(G.multiply(g, representative(G, P)), P.type());
}

inline std::size_t common_depth(const TreeVertex& P, const TreeVertex& Q) {
  std::size_t n = std::min(P.depth(), Q.depth()), i = 0;
  while (i < n && P.path[i] == Q.path[i]) ++i;
  return i;
}

inline std::size_t tree_distance(const TreeVertex& P, const TreeVertex& Q) {
  return P.depth() + Q.depth() - 2 * common_depth(P, Q);
}

inline bool adjacent(const TreeVertex& P, const TreeVertex& Q) { return tree_distance(P, Q) == 1; }

inline TreeVertex truncate(const TreeVertex& P, std::size_t d) {
  return {std::vector<FreeWord>(P.path.begin(), P.path.begin() + static_cast<long>(d))};
}

// vertex sequence of the geodesic from P to Q, endpoints included
inline std::vector<TreeVertex> tree_geodesic(const TreeVertex& P, const TreeVertex& Q) {
  std::size_t c = common_depth(P, Q);
  std::vector<TreeVertex> out;
  for (std::size_t d = P.depth(); d > c; --d) out.push_back(truncate(P, d));
  for (std::size_t d = c; d <= Q.depth(); ++d) out.push_back(truncate(Q, d));
  return out;
}

// label of the edge at P leading to the adjacent vertex Q: the coset
// representative u with the boundary line u * axis(h) in H_P
inline FreeWord edge_label(const TreeVertex& P, const TreeVertex& Q) {
  if (Q.depth() == P.depth() + 1) return Q.path.back();
  return {};
}

// the neighbor of P across the boundary line with label u
inline TreeVertex neighbor(const TreeVertex& P, const FreeWord& u) {
  if (u.empty() && !P.is_root()) return P.parent();
  return P.child(u);
}

// the neighbor of P on the geodesic toward Q (Q != P)
inline TreeVertex step_toward(const TreeVertex& P, const TreeVertex& Q) {
  std::size_t c = common_depth(P, Q);
  if (c < P.depth()) return P.parent();
  return truncate(Q, P.depth() + 1);
}

class NotStabilized : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TreeRay {
  std::vector<TreeVertex> vertices;     // vertices[i] at depth i from vertices[0]
  std::optional<GroupElement> period;   // extends the ray by translation when set
  std::size_t depth() const { return vertices.empty() ? 0 : vertices.size() - 1; }
};

inline void extend(const Amalgam& G, TreeRay& ray, std::size_t depth) {
  if (!ray.period) return;
  while (ray.depth() < depth) {
    std::size_t n = ray.vertices.size();
    std::size_t shift = tree_distance(ray.vertices.front(), act(G, *ray.period, ray.vertices.front()));
    if (shift == 0 || n <= shift) return;
    ray.vertices.push_back(act(G, *ray.period, ray.vertices[n - shift]));
  }
}

// Stabilized common prefix of the tree geodesics v1 -> pi(w_n) over the final quarter.
inline TreeRay limit_ray(const std::vector<GroupElement>& positions) {
  if (positions.empty()) throw NotStabilized("empty path");
  std::size_t N = positions.size() - 1;
  std::size_t start = N - N / 4;
  TreeVertex common = index_map(positions[start]);
  std::size_t m = common.depth();
  for (std::size_t n = start + 1; n <= N; ++n) m = std::min(m, common_depth(common, index_map(positions[n])));
  if (m == 0) throw NotStabilized("no stabilized tree prefix");
  TreeRay ray;
  for (std::size_t d = 0; d <= m; ++d) ray.vertices.push_back(truncate(common, d));
  return ray;
}

}  // namespace admissible

template <>
struct std::hash<admissible::TreeVertex> {
  std::size_t operator()(const admissible::TreeVertex& v) const noexcept {
    std::size_t h = v.path.size();
    for (const auto& w : v.path) h = h * 1000003u ^ std::hash<admissible::FreeWord>{}(w);
    return h;
  }
};
