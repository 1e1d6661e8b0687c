#pragma once

#include <array>
#include <cctype>
#include <cmath>
#include <cstring>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "admissible/config.hpp"
#include "admissible/freegroup.hpp"

namespace admissible {

struct Syllable {
  int vertex = 0;
  FreeWord rep;
  bool operator==(const Syllable&) const = default;
};

// Normal form u_1 ... u_m * c.  Each u_i is a shortlex coset representative of
// the edge group in the vertex group of its tag; c = (j, k) is h^j t^k written
// in the chart of the last syllable's vertex (vertex 0 when there are none).
struct GroupElement {
  std::vector<Syllable> syllables;
  long j = 0, k = 0;

  bool operator==(const GroupElement&) const = default;
  int base_vertex() const { return syllables.empty() ? 0 : syllables.front().vertex; }
  int last_vertex() const { return syllables.empty() ? 0 : syllables.back().vertex; }
  std::size_t syllable_length() const { return syllables.size(); }
};

struct EdgeCoords {
  double h = 0, t = 0;
};

struct Generator {
  std::string name;
  int vertex;
  FreeWord free;
  long fiber;
};

inline void put_varint(std::string& out, long v) {
  unsigned long z = (static_cast<unsigned long>(v) << 1) ^ static_cast<unsigned long>(v >> 63);
  do {
    unsigned char b = z & 0x7f;
    z >>= 7;
    out.push_back(static_cast<char>(b | (z ? 0x80 : 0)));
  } while (z);
}

inline long get_varint(const std::string& in, std::size_t& pos) {
  unsigned long z = 0;
  int shift = 0;
  while (true) {
    unsigned char b = static_cast<unsigned char>(in.at(pos++));
    z |= static_cast<unsigned long>(b & 0x7f) << shift;
    if (!(b & 0x80)) break;
    shift += 7;
  }
  return static_cast<long>(z >> 1) ^ -static_cast<long>(z & 1);
}

inline std::string encode(const GroupElement& x) {
  std::string out;
  out.push_back(static_cast<char>(x.syllables.size()));
  out.push_back(static_cast<char>(x.base_vertex()));
  for (const auto& s : x.syllables) {
    out.push_back(static_cast<char>(s.rep.size()));
    out += s.rep.letters;
  }
  put_varint(out, x.j);
  put_varint(out, x.k);
  return out;
}

inline GroupElement decode(const std::string& in) {
  GroupElement x;
  std::size_t pos = 0;
  std::size_t n = static_cast<unsigned char>(in.at(pos++));
  int v = in.at(pos++);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t len = static_cast<unsigned char>(in.at(pos++));
    x.syllables.push_back({v, FreeWord{in.substr(pos, len)}});
    pos += len;
    v = 1 - v;
  }
  x.j = get_varint(in, pos);
  x.k = get_varint(in, pos);
  return x;
}

struct Measure {
  std::vector<GroupElement> support;
  std::vector<std::string> labels;
  std::vector<double> probability;
};

class Amalgam {
 public:
  explicit Amalgam(GraphOfGroupsConfig cfg = GraphOfGroupsConfig::ck2()) : cfg_(std::move(cfg)) {
    auto violations = validate(cfg_);
    if (!violations.empty()) throw ConfigError(violations);
    if (cfg_.edges[0].from != cfg_.vertices[0].name) std::swap(cfg_.vertices[0], cfg_.vertices[1]);
    h_ = {cfg_.vertices[0].h, cfg_.vertices[1].h};
    m_[0] = cfg_.edges[0].gluing;
    m_[1] = inverse_unimodular(m_[0]);
    const char* names[] = {"a", "A", "b", "B"};
    for (int v = 0; v < 2; ++v)
      for (char l = 0; l < 4; ++l)
        gens_.push_back({std::string(names[static_cast<int>(l)]) + std::to_string(v + 1), v,
                         FreeWord{std::string(1, l)}, 0});
    gens_.push_back({"t1", 0, {}, 1});
    gens_.push_back({"T1", 0, {}, -1});
  }

  const GraphOfGroupsConfig& config() const { return cfg_; }
  const FreeWord& h(int v) const { return h_[v]; }
  // gluing matrix taking the chart of vertex `from` to the other chart
  const Matrix2& gluing_from(int from) const { return m_[from]; }
  const std::vector<Generator>& generators() const { return gens_; }
  std::string generating_set() const {
    std::string s;
    for (const auto& g : gens_) s += g.name + " ";
    return s;
  }

  // the gluing is a signed flip: each fiber is a signed multiple of the other side's h
  bool is_flip() const { return m_[0][0][0] == 0 && m_[0][1][1] == 0; }

  EdgeCoords convert(EdgeCoords c, int from, int to) const {
    if (from == to) return c;
    const Matrix2& m = m_[from];
    return {m[0][0] * c.h + m[0][1] * c.t, m[1][0] * c.h + m[1][1] * c.t};
  }

  std::pair<long, long> convert(long j, long k, int from, int to) const {
    if (from == to) return {j, k};
    const Matrix2& m = m_[from];
    return {m[0][0] * j + m[0][1] * k, m[1][0] * j + m[1][1] * k};
  }

  GroupElement identity() const { return {}; }

  void right_multiply(GroupElement& x, int v, const FreeWord& f, long fiber) const {
    int w = x.last_vertex();
    if (!x.syllables.empty() && w == v) {
      FreeWord F = mul(mul(x.syllables.back().rep, power(h_[v], x.j)), f);
      auto d = coset_decompose(F, h_[v]);
      long kk = x.k + fiber;
      if (d.rep.empty()) {
        x.syllables.pop_back();
        auto c = convert(d.exponent, kk, v, x.last_vertex());
        x.j = c.first;
        x.k = c.second;
      } else {
        x.syllables.back().rep = std::move(d.rep);
        x.j = d.exponent;
        x.k = kk;
      }
      return;
    }
    auto cv = convert(x.j, x.k, w, v);
    FreeWord F = mul(power(h_[v], cv.first), f);
    auto d = coset_decompose(F, h_[v]);
    long kk = cv.second + fiber;
    if (d.rep.empty()) {
      auto c = convert(d.exponent, kk, v, w);
      x.j = c.first;
      x.k = c.second;
    } else {
      x.syllables.push_back({v, std::move(d.rep)});
      x.j = d.exponent;
      x.k = kk;
    }
  }

  GroupElement vertex_element(int v, const FreeWord& f, long fiber) const {
    GroupElement x;
    right_multiply(x, v, f, fiber);
    return x;
  }

  GroupElement multiply(const GroupElement& x, const GroupElement& y) const {
    GroupElement r = x;
    for (const auto& s : y.syllables) right_multiply(r, s.vertex, s.rep, 0);
    right_multiply(r, y.last_vertex(), power(h_[y.last_vertex()], y.j), y.k);
    return r;
  }

  GroupElement invert(const GroupElement& x) const {
    GroupElement r;
    int w = x.last_vertex();
    right_multiply(r, w, power(h_[w], -x.j), -x.k);
    for (auto it = x.syllables.rbegin(); it != x.syllables.rend(); ++it)
      right_multiply(r, it->vertex, inverse(it->rep), 0);
    return r;
  }

  bool equals(const GroupElement& x, const GroupElement& y) const { return x == y; }

  GroupElement generator(std::size_t i) const {
    const auto& g = gens_[i];
    return vertex_element(g.vertex, g.free, g.fiber);
  }

  // free part u*h^j of the last vertex-group factor
  FreeWord last_free_word(const GroupElement& x) const {
    int w = x.last_vertex();
    FreeWord u = x.syllables.empty() ? FreeWord{} : x.syllables.back().rep;
    return mul(u, power(h_[w], x.j));
  }

  // Tokens: [aAbBtThH] then 1|2 (ASCII or subscript), optional ^n, ^-1 or superscript -1.
  GroupElement parse_word(const std::string& text) const {
    GroupElement x;
    std::size_t i = 0, n = text.size();
    auto starts = [&](const char* s) { return text.compare(i, std::strlen(s), s) == 0; };
    while (i < n) {
      char c = text[i];
      if (c == ' ' || c == '\t' || c == '*' || c == '.' || c == '\n') { ++i; continue; }
      if (starts("\xC2\xB7")) { i += 2; continue; }  // middle dot
      if (c == 'e' && (i + 1 == n || text[i + 1] == ' ')) { ++i; continue; }  // identity
      if (std::string("aAbBtThH").find(c) == std::string::npos)
        throw std::invalid_argument("unknown generator symbol at: " + text.substr(i));
      ++i;
      int v;
      if (i < n && (text[i] == '1' || text[i] == '2')) { v = text[i] - '1'; ++i; }
      else if (starts("\xE2\x82\x81")) { v = 0; i += 3; }
      else if (starts("\xE2\x82\x82")) { v = 1; i += 3; }
      else throw std::invalid_argument("generator without vertex index at: " + text.substr(i - 1));
      long e = 1;
      if (starts("\xE2\x81\xBB\xC2\xB9")) { e = -1; i += 5; }
      else if (i < n && text[i] == '^') {
        ++i;
        std::size_t used = 0;
        e = std::stol(text.substr(i), &used);
        i += used;
      }
      bool inv = std::isupper(static_cast<unsigned char>(c));
      if (inv) e = -e;
      char lower = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      FreeWord f;
      long fiber = 0;
      if (lower == 'a') f = power(FreeWord{std::string(1, kA)}, e);
      else if (lower == 'b') f = power(FreeWord{std::string(1, kB)}, e);
      else if (lower == 'h') f = power(h_[v], e);
      else fiber = e;
      right_multiply(x, v, f, fiber);
    }
    return x;
  }

  std::string spell(const GroupElement& x) const {
    std::string s;
    auto tok = [&](const std::string& t) { s += (s.empty() ? "" : " ") + t; };
    for (const auto& syl : x.syllables)
      for (char l : syl.rep.letters) tok(std::string(1, char_from_letter(l)) + std::to_string(syl.vertex + 1));
    int w = x.last_vertex();
    if (x.j != 0) tok("h" + std::to_string(w + 1) + (x.j == 1 ? "" : "^" + std::to_string(x.j)));
    if (x.k != 0) tok("t" + std::to_string(w + 1) + (x.k == 1 ? "" : "^" + std::to_string(x.k)));
    return s.empty() ? "e" : s;
  }

  Measure uniform_generator_measure() const {
    Measure m;
    for (std::size_t i = 0; i < gens_.size(); ++i) {
      m.support.push_back(generator(i));
      m.labels.push_back(gens_[i].name);
      m.probability.push_back(1.0 / static_cast<double>(gens_.size()));
    }
    return m;
  }

 private:
  GraphOfGroupsConfig cfg_;
  std::array<FreeWord, 2> h_;
  std::array<Matrix2, 2> m_;
  std::vector<Generator> gens_;
};

inline GroupElement random_word(const Amalgam& G, std::size_t n, std::uint64_t seed, const Measure& mu,
                                std::vector<std::size_t>* draws = nullptr) {
  std::mt19937_64 rng(seed);
  std::discrete_distribution<std::size_t> pick(mu.probability.begin(), mu.probability.end());
  GroupElement x;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t d = pick(rng);
    if (draws) draws->push_back(d);
    x = G.multiply(x, mu.support[d]);
  }
  return x;
}

class ResourceCapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Ball {
  int radius = 0;
  std::string genset;
  std::string config_hash;
  std::vector<std::string> members;  // encoded, in BFS order
  std::vector<std::uint8_t> length;
  std::unordered_map<std::string, std::uint32_t> index;

  std::size_t size() const { return members.size(); }
  GroupElement element(std::size_t i) const { return decode(members[i]); }
  std::optional<int> word_length(const GroupElement& x) const {
    auto it = index.find(encode(x));
    if (it == index.end()) return std::nullopt;
    return length[it->second];
  }
  std::size_t layer_size(int r) const {
    std::size_t c = 0;
    for (auto l : length) c += l == r;
    return c;
  }
};

constexpr int kBallCap = 6;

inline Ball ball(const Amalgam& G, int radius, int cap = kBallCap) {
  if (radius > cap) throw ResourceCapError("ball radius " + std::to_string(radius) + " exceeds cap " + std::to_string(cap));
  Ball b;
  b.radius = radius;
  b.genset = G.generating_set();
  b.config_hash = G.config().hash();
  std::vector<GroupElement> gens;
  for (std::size_t i = 0; i < G.generators().size(); ++i) gens.push_back(G.generator(i));
  auto add = [&](const GroupElement& x, int len) {
    std::string e = encode(x);
    if (b.index.count(e)) return;
    b.index.emplace(e, static_cast<std::uint32_t>(b.members.size()));
    b.members.push_back(std::move(e));
    b.length.push_back(static_cast<std::uint8_t>(len));
  };
  add(G.identity(), 0);
  std::size_t begin = 0;
  for (int r = 1; r <= radius; ++r) {
    std::size_t end = b.members.size();
    for (std::size_t i = begin; i < end; ++i) {
      GroupElement x = decode(b.members[i]);
      for (std::size_t g = 0; g < G.generators().size(); ++g) {
        const auto& gen = G.generators()[g];
        GroupElement y = x;
        G.right_multiply(y, gen.vertex, gen.free, gen.fiber);
        add(y, r);
      }
    }
    begin = end;
  }
  return b;
}

constexpr std::uint32_t kBallCacheVersion = 1;

inline std::filesystem::path ball_cache_path(const std::filesystem::path& dir, const Amalgam& G, int radius) {
  std::string key = sha256_hex(G.config().hash() + "|" + G.generating_set() + "|" + std::to_string(radius)).substr(0, 16);
  return dir / ("ball-r" + std::to_string(radius) + "-" + key + ".bin");
}

inline void write_ball(const Ball& b, const std::filesystem::path& path) {
  std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    auto put32 = [&](std::uint32_t v) { out.write(reinterpret_cast<const char*>(&v), 4); };
    auto putstr = [&](const std::string& s) {
      put32(static_cast<std::uint32_t>(s.size()));
      out.write(s.data(), static_cast<std::streamsize>(s.size()));
    };
    out.write("ADMBALL\0", 8);
    put32(kBallCacheVersion);
    putstr(b.config_hash);
    putstr(b.genset);
    put32(static_cast<std::uint32_t>(b.radius));
    put32(static_cast<std::uint32_t>(b.members.size()));
    for (std::size_t i = 0; i < b.members.size(); ++i) {
      out.put(static_cast<char>(b.length[i]));
      out.put(static_cast<char>(b.members[i].size()));
      out.write(b.members[i].data(), static_cast<std::streamsize>(b.members[i].size()));
    }
    if (!out) throw std::runtime_error("failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

inline std::optional<Ball> read_ball(const std::filesystem::path& path, const Amalgam& G, int radius) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  auto get32 = [&]() {
    std::uint32_t v = 0;
    in.read(reinterpret_cast<char*>(&v), 4);
    return v;
  };
  auto getstr = [&]() {
    std::string s(get32(), '\0');
    in.read(s.data(), static_cast<std::streamsize>(s.size()));
    return s;
  };
  char magic[8];
  in.read(magic, 8);
  if (!in || std::string(magic, 7) != "ADMBALL" || get32() != kBallCacheVersion) return std::nullopt;
  Ball b;
  b.config_hash = getstr();
  b.genset = getstr();
  b.radius = static_cast<int>(get32());
  if (b.config_hash != G.config().hash() || b.genset != G.generating_set() || b.radius != radius) return std::nullopt;
  std::uint32_t n = get32();
  b.members.reserve(n);
  b.length.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    int len = in.get();
    std::string e(static_cast<std::size_t>(static_cast<unsigned char>(in.get())), '\0');
    in.read(e.data(), static_cast<std::streamsize>(e.size()));
    b.index.emplace(e, i);
    b.members.push_back(std::move(e));
    b.length.push_back(static_cast<std::uint8_t>(len));
  }
  if (!in) return std::nullopt;
  return b;
}

inline Ball cached_ball(const Amalgam& G, int radius, const std::filesystem::path& dir) {
  auto path = ball_cache_path(dir, G, radius);
  if (auto b = read_ball(path, G, radius)) return *b;
  Ball b = ball(G, radius);
  write_ball(b, path);
  return b;
}

}  // namespace admissible
