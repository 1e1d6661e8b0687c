#pragma once

#include <array>
#include <cctype>
#include <cstdint>
#include <iomanip>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <openssl/evp.h>

#include "admissible/freegroup.hpp"

namespace admissible {

using Matrix2 = std::array<std::array<long, 2>, 2>;

inline long det(const Matrix2& m) { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }

inline Matrix2 inverse_unimodular(const Matrix2& m) {
  long d = det(m);
  return {{{m[1][1] * d, -m[0][1] * d}, {-m[1][0] * d, m[0][0] * d}}};
}

struct VertexSpec {
  std::string name;
  int rank = 2;
  std::string fiber;
  FreeWord h;
};

struct EdgeSpec {
  std::string from, to;
  Matrix2 gluing{};  // (h-, t-) coordinates -> (h+, t+) coordinates
};

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> v)
      : std::runtime_error(join(v)), violations(std::move(v)) {}
  std::vector<std::string> violations;

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::string s;
    for (const auto& x : v) s += (s.empty() ? "" : "; ") + x;
    return s;
  }
};

inline std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int n = 0;
  EVP_Digest(data.data(), data.size(), md, &n, EVP_sha256(), nullptr);
  std::ostringstream os;
  for (unsigned int i = 0; i < n; ++i)
    os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return os.str();
}

inline std::uint64_t sub_seed(std::uint64_t seed, const std::string& tag) {
  std::string hex = sha256_hex(std::to_string(seed) + ":" + tag);
  return std::stoull(hex.substr(0, 16), nullptr, 16);
}

struct GraphOfGroupsConfig {
  std::string name = "custom";
  std::vector<VertexSpec> vertices;
  std::vector<EdgeSpec> edges;

  static GraphOfGroupsConfig ck2() {
    GraphOfGroupsConfig c;
    c.name = "CK2";
    c.vertices = {{"v1", 2, "t1", word("ab")}, {"v2", 2, "t2", word("ab")}};
    c.edges = {{"v1", "v2", {{{0, 1}, {1, 0}}}}};
    return c;
  }

  std::string canonical() const {
    std::ostringstream os;
    for (const auto& v : vertices)
      os << "[vertex]\nname = " << v.name << "\nrank = " << v.rank
         << "\nfiber = " << v.fiber << "\nh = " << v.h.str() << "\n\n";
    for (const auto& e : edges)
      os << "[edge]\nfrom = " << e.from << "\nto = " << e.to << "\ngluing = "
         << e.gluing[0][0] << " " << e.gluing[0][1] << " / " << e.gluing[1][0]
         << " " << e.gluing[1][1] << "\n\n";
    return os.str();
  }

  std::string hash() const { return sha256_hex(canonical()).substr(0, 16); }
};

inline std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline GraphOfGroupsConfig parse_config(const std::string& text) {
  GraphOfGroupsConfig cfg;
  std::vector<std::string> errors;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto c = line.find('#'); c != std::string::npos) line.resize(c);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      section = line;
      if (section == "[vertex]")
        cfg.vertices.emplace_back();
      else if (section == "[edge]")
        cfg.edges.emplace_back();
      else if (section == "[graph]")
        ;
      else
        errors.push_back("line " + std::to_string(lineno) + ": unknown section " + section);
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      errors.push_back("line " + std::to_string(lineno) + ": expected key = value");
      continue;
    }
    std::string key = trim(line.substr(0, eq)), val = trim(line.substr(eq + 1));
    try {
      if (section == "[graph]" && key == "name") {
        cfg.name = val;
      } else if (section == "[vertex]") {
        auto& v = cfg.vertices.back();
        if (key == "name") v.name = val;
        else if (key == "rank") v.rank = std::stoi(val);
        else if (key == "fiber") v.fiber = val;
        else if (key == "h") {
          std::string raw;
          for (char ch : val) raw.push_back(letter_from_char(ch));
          v.h = FreeWord{raw};
        } else errors.push_back("line " + std::to_string(lineno) + ": unknown key " + key);
      } else if (section == "[edge]") {
        auto& e = cfg.edges.back();
        if (key == "from") e.from = val;
        else if (key == "to") e.to = val;
        else if (key == "gluing") {
          std::string digits;
          for (char ch : val) digits.push_back((std::isdigit(static_cast<unsigned char>(ch)) || ch == '-') ? ch : ' ');
          std::istringstream ns(digits);
          std::vector<long> nums;
          long x;
          while (ns >> x) nums.push_back(x);
          if (nums.size() != 4) throw std::invalid_argument("gluing needs 4 integers");
          e.gluing = {{{nums[0], nums[1]}, {nums[2], nums[3]}}};
        } else errors.push_back("line " + std::to_string(lineno) + ": unknown key " + key);
      } else {
        errors.push_back("line " + std::to_string(lineno) + ": key outside a section");
      }
    } catch (const std::exception& ex) {
      errors.push_back("line " + std::to_string(lineno) + ": " + ex.what());
    }
  }
  if (!errors.empty()) throw ConfigError(errors);
  return cfg;
}

// Itemized admissibility violations checkable at the given free-group radius.
inline std::vector<std::string> validate(const GraphOfGroupsConfig& cfg, std::size_t radius = 3) {
  std::vector<std::string> out;
  if (cfg.vertices.size() != 2 || cfg.edges.size() != 1)
    out.push_back("unsupported graph shape: exactly two vertices and one edge are supported");
  for (const auto& v : cfg.vertices) {
    if (v.rank != 2) out.push_back("vertex " + v.name + ": rank must be 2");
    std::string raw = v.h.letters;
    if (reduce(raw).size() != raw.size()) out.push_back("vertex " + v.name + ": h is not freely reduced");
    else if (v.h.empty()) out.push_back("vertex " + v.name + ": h is trivial");
    else if (!is_cyclically_reduced(v.h)) out.push_back("vertex " + v.name + ": h is not cyclically reduced");
    else if (is_proper_power(v.h)) out.push_back("vertex " + v.name + ": h is a proper power");
    else {
      for (const auto& g : free_ball(radius)) {
        if (in_cyclic_subgroup(g, v.h)) continue;
        FreeWord c = mul(mul(g, v.h), inverse(g));
        if (in_cyclic_subgroup(c, v.h)) {
          out.push_back("vertex " + v.name + ": <h> is not malnormal (conjugator " + g.str() + ")");
          break;
        }
      }
    }
  }
  for (const auto& e : cfg.edges) {
    bool found_from = false, found_to = false;
    for (const auto& v : cfg.vertices) {
      found_from |= v.name == e.from;
      found_to |= v.name == e.to;
    }
    if (!found_from || !found_to) out.push_back("edge " + e.from + "-" + e.to + ": unknown endpoint");
    if (e.from == e.to) out.push_back("edge " + e.from + "-" + e.to + ": loops are not supported");
    long d = det(e.gluing);
    if (d == 0) out.push_back("edge " + e.from + "-" + e.to + ": gluing matrix is singular");
    else if (d != 1 && d != -1) out.push_back("edge " + e.from + "-" + e.to + ": gluing matrix is not invertible over Z");
    else {
      // fiber of the far side, written in near coordinates
      Matrix2 inv = inverse_unimodular(e.gluing);
      if (inv[0][1] == 0)
        out.push_back("edge " + e.from + "-" + e.to + ": fiber directions do not span a finite-index subgroup");
    }
  }
  return out;
}

}  // namespace admissible
