#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace admissible {

// letters are encoded 0..3 in the order a < a^-1 < b < b^-1
enum Letter : char { kA = 0, kAinv = 1, kB = 2, kBinv = 3 };

inline char inverse_letter(char l) { return static_cast<char>(l ^ 1); }

inline char letter_from_char(char c) {
  switch (c) {
    case 'a': return kA;
    case 'A': return kAinv;
    case 'b': return kB;
    case 'B': return kBinv;
  }
  throw std::invalid_argument(std::string("not a free-group letter: ") + c);
}

inline char char_from_letter(char l) { return "aAbB"[static_cast<int>(l)]; }

struct FreeWord {
  std::string letters;  // freely reduced, values 0..3

  std::size_t size() const { return letters.size(); }
  bool empty() const { return letters.empty(); }
  char operator[](std::size_t i) const { return letters[i]; }

  bool operator==(const FreeWord&) const = default;

  std::strong_ordering operator<=>(const FreeWord& o) const {
    if (size() != o.size()) return size() <=> o.size();
    return letters <=> o.letters;
  }

  std::string str() const {
    std::string s(letters);
    for (auto& c : s) c = char_from_letter(c);
    return s;
  }
};

inline FreeWord reduce(std::string_view raw) {
  FreeWord w;
  w.letters.reserve(raw.size());
  for (char l : raw) {
    if (!w.letters.empty() && w.letters.back() == inverse_letter(l))
      w.letters.pop_back();
    else
      w.letters.push_back(l);
  }
  return w;
}

inline FreeWord word(std::string_view text) {
  std::string raw;
  raw.reserve(text.size());
  for (char c : text) raw.push_back(letter_from_char(c));
  return reduce(raw);
}

inline FreeWord inverse(const FreeWord& w) {
  FreeWord r;
  r.letters.assign(w.letters.rbegin(), w.letters.rend());
  for (auto& c : r.letters) c = inverse_letter(c);
  return r;
}

inline FreeWord mul(const FreeWord& u, const FreeWord& v) {
  std::size_t k = 0;
  while (k < u.size() && k < v.size() &&
         u[u.size() - 1 - k] == inverse_letter(v[k]))
    ++k;
  FreeWord r;
  r.letters.reserve(u.size() + v.size() - 2 * k);
  r.letters.append(u.letters, 0, u.size() - k);
  r.letters.append(v.letters, k, std::string::npos);
  return r;
}

inline FreeWord power(const FreeWord& w, long k) {
  FreeWord base = k < 0 ? inverse(w) : w;
  FreeWord r;
  for (long i = 0; i < std::abs(k); ++i) r = mul(r, base);
  return r;
}

inline std::size_t common_prefix(const FreeWord& u, const FreeWord& v) {
  std::size_t n = std::min(u.size(), v.size()), i = 0;
  while (i < n && u[i] == v[i]) ++i;
  return i;
}

inline FreeWord prefix(const FreeWord& w, std::size_t n) {
  return FreeWord{w.letters.substr(0, n)};
}

inline std::size_t tree_distance(const FreeWord& u, const FreeWord& v) {
  return u.size() + v.size() - 2 * common_prefix(u, v);
}

inline FreeWord median(const FreeWord& x, const FreeWord& y, const FreeWord& z) {
  std::size_t xy = common_prefix(x, y), xz = common_prefix(x, z),
              yz = common_prefix(y, z);
  if (xy >= xz && xy >= yz) return prefix(x, xy);
  if (xz >= yz) return prefix(x, xz);
  return prefix(y, yz);
}

// w = conj * core * conj^-1 with core cyclically reduced
inline std::pair<FreeWord, FreeWord> cyclic_reduction(const FreeWord& w) {
  std::size_t i = 0, n = w.size();
  while (2 * i + 1 < n && w[i] == inverse_letter(w[n - 1 - i])) ++i;
  return {prefix(w, i), FreeWord{w.letters.substr(i, n - 2 * i)}};
}

inline bool is_cyclically_reduced(const FreeWord& w) {
  return w.size() < 2 || w[0] != inverse_letter(w[w.size() - 1]);
}

inline bool is_proper_power(const FreeWord& w) {
  const std::string& c = cyclic_reduction(w).second.letters;
  if (c.empty()) return false;
  return (c + c).find(c, 1) < c.size();
}

// Axis of translate * core * translate^-1.  Position p >= 0 names the vertex
// translate * (first p letters of core^inf), p < 0 the vertex
// translate * (first -p letters of core^-inf).
struct Axis {
  FreeWord core;
  FreeWord translate;
};

inline char axis_letter(const FreeWord& core, long i) {
  // letter leading from position i to i+1
  long n = static_cast<long>(core.size());
  return core[static_cast<std::size_t>(((i % n) + n) % n)];
}

inline FreeWord axis_vertex(const Axis& ax, long p) {
  std::string raw;
  raw.reserve(static_cast<std::size_t>(std::abs(p)));
  if (p >= 0)
    for (long i = 0; i < p; ++i) raw.push_back(axis_letter(ax.core, i));
  else
    for (long i = -1; i >= p; --i)
      raw.push_back(inverse_letter(axis_letter(ax.core, i)));
  return mul(ax.translate, FreeWord{raw});
}

struct AxisProjection {
  FreeWord point;
  std::size_t distance = 0;
  long position = 0;
};

inline AxisProjection project_to_axis(const FreeWord& w, const Axis& ax) {
  FreeWord local = mul(inverse(ax.translate), w);
  long plus = 0, minus = 0;
  while (plus < static_cast<long>(local.size()) &&
         local[plus] == axis_letter(ax.core, plus))
    ++plus;
  while (minus < static_cast<long>(local.size()) &&
         local[minus] == inverse_letter(axis_letter(ax.core, -1 - minus)))
    ++minus;
  long pos = plus > 0 ? plus : -minus;
  AxisProjection r;
  r.position = pos;
  r.distance = local.size() - static_cast<std::size_t>(std::abs(pos));
  r.point = mul(ax.translate, prefix(local, static_cast<std::size_t>(std::abs(pos))));
  return r;
}

struct CosetDecomposition {
  FreeWord rep;
  long exponent = 0;  // w = rep * h^exponent
};

inline CosetDecomposition coset_decompose(const FreeWord& w, const FreeWord& h) {
  if (h.empty()) return {w, 0};
  long L = static_cast<long>(h.size());
  AxisProjection pr = project_to_axis(inverse(w), Axis{h, {}});
  long p = pr.position;
  long q = p >= 0 ? p / L : -((-p + L - 1) / L);
  CosetDecomposition best;
  bool have = false;
  for (long k = q - 1; k <= q + 2; ++k) {
    FreeWord c = mul(w, power(h, k));
    if (!have || c < best.rep) {
      best.rep = std::move(c);
      best.exponent = -k;
      have = true;
    }
  }
  return best;
}

inline FreeWord coset_rep(const FreeWord& w, const FreeWord& h) {
  return coset_decompose(w, h).rep;
}

inline bool in_cyclic_subgroup(const FreeWord& w, const FreeWord& h) {
  return coset_rep(w, h).empty();
}

// all reduced words of length <= radius in shortlex order
inline std::vector<FreeWord> free_ball(std::size_t radius) {
  std::vector<FreeWord> out{FreeWord{}};
  std::size_t begin = 0;
  for (std::size_t r = 0; r < radius; ++r) {
    std::size_t end = out.size();
    for (std::size_t i = begin; i < end; ++i)
      for (char l = 0; l < 4; ++l) {
        if (!out[i].empty() && out[i].letters.back() == inverse_letter(l)) continue;
        FreeWord w = out[i];
        w.letters.push_back(l);
        out.push_back(std::move(w));
      }
    begin = end;
  }
  return out;
}

}  // namespace admissible

template <>
struct std::hash<admissible::FreeWord> {
  std::size_t operator()(const admissible::FreeWord& w) const noexcept {
    return std::hash<std::string>{}(w.letters);
  }
};
