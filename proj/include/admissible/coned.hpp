#pragma once

#include <deque>
#include <limits>
#include <optional>
#include <unordered_map>
#include <vector>

#include "admissible/blocks.hpp"

namespace admissible {

// A point of the coned-off tree: a vertex of H_v or the apex over the line label * axis(h).
struct HatPoint {
  bool apex = false;
  FreeWord at;
  bool operator==(const HatPoint&) const = default;
  std::string str() const { return apex ? "c[" + at.str() + "]" : at.str(); }
};

inline HatPoint hat_vertex(FreeWord w) { return {false, std::move(w)}; }
inline HatPoint hat_apex(FreeWord label) { return {true, std::move(label)}; }

inline FreeWord axis_prefix(const FreeWord& h, std::size_t phase) { return prefix(h, phase); }

// labels of the |h| lines through x
inline std::vector<FreeWord> lines_through(const FreeWord& h, const FreeWord& x) {
  std::vector<FreeWord> out;
  for (std::size_t phi = 0; phi < h.size(); ++phi) out.push_back(coset_rep(mul(x, inverse(axis_prefix(h, phi))), h));
  return out;
}

inline bool on_line(const FreeWord& h, const FreeWord& label, const FreeWord& x) {
  return project_to_axis(x, Axis{h, label}).distance == 0;
}

// run[i]: longest suffix of w[0, i) that is a factor of h^Z or h^-Z
inline std::vector<std::size_t> line_runs(const FreeWord& h, const FreeWord& w) {
  std::size_t L = h.size(), n = w.size();
  FreeWord hi = inverse(h);
  std::vector<std::size_t> run(n + 1, 0), cur(2 * L, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    std::size_t best = 0;
    for (std::size_t phi = 0; phi < L; ++phi) {
      std::size_t k = (phi + i - 1) % L;
      cur[phi] = w[i - 1] == h[k] ? cur[phi] + 1 : 0;
      cur[L + phi] = w[i - 1] == hi[k] ? cur[L + phi] + 1 : 0;
      best = std::max({best, cur[phi], cur[L + phi]});
    }
    run[i] = best;
  }
  return run;
}

struct HatRoute {
  std::size_t length = 0;
  std::vector<HatPoint> points;
};

// geodesic between two vertices of the coned tree; it stays over the tree geodesic
inline HatRoute hat_route(const FreeWord& h, const FreeWord& p, const FreeWord& q, bool want_points = false) {
  FreeWord w = mul(inverse(p), q);
  std::size_t n = w.size();
  auto run = line_runs(h, w);
  std::vector<std::size_t> dist(n + 1, 0), from(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    dist[i] = dist[i - 1] + 1;
    from[i] = i - 1;
    for (std::size_t j = i - run[i]; j + 2 <= i; ++j)
      if (dist[j] + 2 < dist[i]) {
        dist[i] = dist[j] + 2;
        from[i] = j;
      }
  }
  HatRoute r;
  r.length = dist[n];
  if (!want_points) return r;
  std::vector<std::size_t> stops{n};
  while (stops.back() != 0) stops.push_back(from[stops.back()]);
  std::reverse(stops.begin(), stops.end());
  auto vertex = [&](std::size_t i) { return mul(p, prefix(w, i)); };
  r.points.push_back(hat_vertex(p));
  for (std::size_t s = 1; s < stops.size(); ++s) {
    std::size_t j = stops[s - 1], i = stops[s];
    if (i > j + 1) {
      FreeWord a = vertex(j), b = vertex(i);
      for (const auto& u : lines_through(h, a))
        if (on_line(h, u, b)) {
          r.points.push_back(hat_apex(u));
          break;
        }
    }
    r.points.push_back(hat_vertex(vertex(i)));
  }
  return r;
}

inline std::size_t hat_distance(const FreeWord& h, const FreeWord& p, const FreeWord& q) {
  return hat_route(h, p, q).length;
}

inline std::size_t hat_distance(const FreeWord& h, const HatPoint& a, const HatPoint& b) {
  if (!a.apex && !b.apex) return hat_distance(h, a.at, b.at);
  if (a.apex && b.apex) {
    if (a.at == b.at) return 0;
    auto [lo1, hi1] = line_projection_letters(h, b.at, a.at);
    auto [lo2, hi2] = line_projection_letters(h, a.at, b.at);
    FreeWord e1 = axis_vertex(Axis{h, a.at}, lo1 + (hi1 - lo1) / 2);
    FreeWord e2 = axis_vertex(Axis{h, b.at}, lo2 + (hi2 - lo2) / 2);
    if (lo1 != hi1) return 2;
    return 2 + hat_distance(h, e1, e2);
  }
  const HatPoint& c = a.apex ? a : b;
  const FreeWord& q = a.apex ? b.at : a.at;
  AxisProjection pr = project_to_axis(q, Axis{h, c.at});
  if (pr.distance == 0) return 1;
  return 1 + hat_distance(h, pr.point, q);
}

// Explicit coned graph over the neighborhood of a geodesic, for checking the closed form.
class ConedGraph {
 public:
  ConedGraph(FreeWord h, const FreeWord& x, const FreeWord& y, std::size_t margin) : h_(std::move(h)), margin_(margin) {
    FreeWord w = mul(inverse(x), y);
    std::deque<FreeWord> queue;
    for (std::size_t i = 0; i <= w.size(); ++i) add(mul(x, prefix(w, i)), 0, queue);
    while (!queue.empty()) {
      FreeWord v = std::move(queue.front());
      queue.pop_front();
      std::size_t d = depth_[index_.at(v)];
      if (d == margin_) continue;
      for (char l = 0; l < 4; ++l) add(mul(v, FreeWord{std::string(1, l)}), d + 1, queue);
    }
    std::size_t nv = words_.size();
    adj_.resize(nv);
    for (std::size_t i = 0; i < nv; ++i) {
      for (char l = 0; l < 4; ++l) {
        auto it = index_.find(mul(words_[i], FreeWord{std::string(1, l)}));
        if (it != index_.end()) adj_[i].push_back(it->second);
      }
      for (auto& u : lines_through(h_, words_[i])) {
        auto [it, fresh] = apex_.try_emplace(u, adj_.size());
        if (fresh) {
          adj_.emplace_back();
          labels_.push_back(u);
        }
        adj_[i].push_back(it->second);
        adj_[it->second].push_back(i);
      }
    }
  }

  std::size_t margin() const { return margin_; }
  std::size_t vertex_count() const { return words_.size(); }
  std::size_t node_count() const { return adj_.size(); }

  std::optional<std::size_t> node(const HatPoint& p) const {
    if (p.apex) {
      auto it = apex_.find(p.at);
      if (it == apex_.end()) return std::nullopt;
      return it->second;
    }
    auto it = index_.find(p.at);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  struct Result {
    std::size_t distance = 0;
    bool touched_boundary = false;  // some vertex strictly closer than the target sits on the margin sphere
  };

  std::optional<Result> distance(const HatPoint& a, const HatPoint& b) const {
    auto s = node(a), t = node(b);
    if (!s || !t) return std::nullopt;
    const std::size_t inf = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> dist(adj_.size(), inf);
    std::deque<std::size_t> queue{*s};
    dist[*s] = 0;
    Result r;
    while (!queue.empty()) {
      std::size_t v = queue.front();
      queue.pop_front();
      if (v == *t) {
        r.distance = dist[v];
        return r;
      }
      if (v < words_.size() && depth_[v] == margin_) r.touched_boundary = true;
      for (std::size_t u : adj_[v])
        if (dist[u] == inf) {
          dist[u] = dist[v] + 1;
          queue.push_back(u);
        }
    }
    return std::nullopt;
  }

 private:
  void add(FreeWord w, std::size_t d, std::deque<FreeWord>& queue) {
    if (index_.count(w)) return;
    index_.emplace(w, words_.size());
    words_.push_back(w);
    depth_.push_back(d);
    queue.push_back(std::move(w));
  }

  FreeWord h_;
  std::size_t margin_;
  std::vector<FreeWord> words_;
  std::vector<std::size_t> depth_;
  std::unordered_map<FreeWord, std::size_t> index_;
  std::unordered_map<FreeWord, std::size_t> apex_;
  std::vector<FreeWord> labels_;
  std::vector<std::vector<std::size_t>> adj_;
};

inline std::size_t coned_margin(const FreeWord& h, const FreeWord& x, const FreeWord& y) {
  return std::max(x.size(), y.size()) + 2 * h.size() + 4;
}

// BFS distance, doubling the margin until no path shorter than the answer reaches the boundary
inline std::size_t coned_graph_distance(const FreeWord& h, const HatPoint& a, const HatPoint& b,
                                        std::size_t max_margin = 12) {
  std::size_t m = std::min(coned_margin(h, a.at, b.at), max_margin);
  while (true) {
    ConedGraph g(h, a.at, b.at, m);
    auto r = g.distance(a, b);
    if (r && (!r->touched_boundary || m >= max_margin)) return r->distance;
    if (m >= max_margin) throw ResourceCapError("coned graph margin exceeds cap");
    m = std::min(2 * m, max_margin);
  }
}

}  // namespace admissible
