#pragma once

#include <nlohmann/json.hpp>

#include <functional>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "elliptic/geometry.hpp"

namespace elliptic::diagram {

using geom::Vector;

enum class Fill { White, Black, Gray };

inline std::string to_string(Fill f) {
  switch (f) {
    case Fill::White: return "white";
    case Fill::Black: return "black";
    case Fill::Gray: return "gray";
  }
  throw std::logic_error("unknown fill");
}

// Edge kinds, by the pairings (I(alpha_dual,beta), I(beta_dual,alpha)):
//   Plain (-1,-1); T2/T3/T4 {-1,-t} with the arrow toward the shorter root;
//   Inf (-2,-2); E4 dashed double (+2,+2); E5 dashed double arrow {4,1},
//   oriented toward the node on the "doubled" (longer) side.
enum class EdgeKind { Plain, T2, T3, T4, Inf, E4, E5 };

inline std::string to_string(EdgeKind k) {
  switch (k) {
    case EdgeKind::Plain: return "plain";
    case EdgeKind::T2: return "t2";
    case EdgeKind::T3: return "t3";
    case EdgeKind::T4: return "t4";
    case EdgeKind::Inf: return "inf";
    case EdgeKind::E4: return "e4";
    case EdgeKind::E5: return "e5";
  }
  throw std::logic_error("unknown edge kind");
}

struct Node {
  std::string label;
  Fill fill = Fill::White;
};

struct Edge {
  std::size_t i = 0, j = 0;  // node indices, i < j
  EdgeKind kind = EdgeKind::Plain;
  int toward = -1;  // for oriented kinds: index of the target node; else -1
};

struct Diagram {
  std::vector<Node> nodes;
  std::vector<Edge> edges;
};

// Classifies the bond between two roots; nullopt when orthogonal.
inline std::optional<Edge> classify_edge(std::size_t i, std::size_t j, const Vector& alpha,
                                         const Vector& beta) {
  Rational u = geom::pairing(alpha, beta);  // I(alpha_dual, beta)
  Rational v = geom::pairing(beta, alpha);  // I(beta_dual, alpha)
  if (!is_integer(u) || !is_integer(v))
    throw std::domain_error("classify_edge: non-integral pairing");
  long a = to_long(u), b = to_long(v);
  if (a == 0 && b == 0) return std::nullopt;
  Edge e{i, j, EdgeKind::Plain, -1};
  auto oriented = [&](long small, long big) {
    // arrow toward the root whose dual pairing has magnitude |big|
    // (that root is the shorter one for T-edges)
    e.toward = (b == big) ? static_cast<int>(j) : static_cast<int>(i);
    (void)small;
  };
  if (a == -1 && b == -1) return e;
  if ((a == -1 && b == -2) || (a == -2 && b == -1)) {
    e.kind = EdgeKind::T2;
    oriented(-1, -2);
    return e;
  }
  if ((a == -1 && b == -3) || (a == -3 && b == -1)) {
    e.kind = EdgeKind::T3;
    oriented(-1, -3);
    return e;
  }
  if ((a == -1 && b == -4) || (a == -4 && b == -1)) {
    e.kind = EdgeKind::T4;
    oriented(-1, -4);
    return e;
  }
  if (a == -2 && b == -2) {
    e.kind = EdgeKind::Inf;
    return e;
  }
  if (a == 2 && b == 2) {
    e.kind = EdgeKind::E4;
    return e;
  }
  if ((a == 4 && b == 1) || (a == 1 && b == 4)) {
    e.kind = EdgeKind::E5;
    // Oriented toward the longer root, i.e. the side whose dual pairing is 1.
    e.toward = (b == 1) ? static_cast<int>(j) : static_cast<int>(i);
    return e;
  }
  throw std::domain_error("classify_edge: pairings (" + std::to_string(a) + "," +
                          std::to_string(b) + ") do not form a valid bond");
}

// Builds a diagram from simple roots; `is_black` decides the node fill
// (for finite/affine diagrams: black iff twice the root is again a root).
inline Diagram build_diagram(const std::vector<Vector>& simple_roots,
                             const std::vector<std::string>& labels,
                             const std::function<bool(const Vector&)>& is_black) {
  Diagram d;
  for (std::size_t i = 0; i < simple_roots.size(); ++i)
    d.nodes.push_back({labels.at(i), is_black(simple_roots[i]) ? Fill::Black : Fill::White});
  for (std::size_t i = 0; i < simple_roots.size(); ++i)
    for (std::size_t j = i + 1; j < simple_roots.size(); ++j)
      if (auto e = classify_edge(i, j, simple_roots[i], simple_roots[j])) d.edges.push_back(*e);
  return d;
}

namespace detail {
// Per-node signature: fill plus the multiset of incident (kind, direction).
inline std::vector<std::string> node_signatures(const Diagram& d) {
  std::vector<std::vector<std::string>> inc(d.nodes.size());
  for (const auto& e : d.edges) {
    std::string k = to_string(e.kind);
    std::string di = k, dj = k;
    if (e.toward >= 0) {
      di += (static_cast<std::size_t>(e.toward) == e.i) ? "<in" : ">out";
      dj += (static_cast<std::size_t>(e.toward) == e.j) ? "<in" : ">out";
    }
    inc[e.i].push_back(di);
    inc[e.j].push_back(dj);
  }
  std::vector<std::string> sig(d.nodes.size());
  for (std::size_t i = 0; i < d.nodes.size(); ++i) {
    std::sort(inc[i].begin(), inc[i].end());
    sig[i] = to_string(d.nodes[i].fill);
    for (const auto& s : inc[i]) sig[i] += "|" + s;
  }
  return sig;
}

inline std::optional<Edge> edge_between(const Diagram& d, std::size_t i, std::size_t j) {
  for (const auto& e : d.edges)
    if ((e.i == i && e.j == j) || (e.i == j && e.j == i)) return e;
  return std::nullopt;
}
}  // namespace detail

// Graph isomorphism respecting fills, edge kinds, and arrow directions.
// Backtracking with node-signature pruning; diagrams here are tiny.
inline bool isomorphic(const Diagram& A, const Diagram& B) {
  if (A.nodes.size() != B.nodes.size() || A.edges.size() != B.edges.size()) return false;
  auto sa = detail::node_signatures(A), sb = detail::node_signatures(B);
  {
    auto ca = sa, cb = sb;
    std::sort(ca.begin(), ca.end());
    std::sort(cb.begin(), cb.end());
    if (ca != cb) return false;
  }
  std::vector<int> map(A.nodes.size(), -1);
  std::vector<char> used(B.nodes.size(), 0);
  std::function<bool(std::size_t)> go = [&](std::size_t i) -> bool {
    if (i == A.nodes.size()) return true;
    for (std::size_t j = 0; j < B.nodes.size(); ++j) {
      if (used[j] || sa[i] != sb[j]) continue;
      bool ok = true;
      for (std::size_t k = 0; k < i && ok; ++k) {
        auto ea = detail::edge_between(A, i, k);
        auto eb = detail::edge_between(B, j, static_cast<std::size_t>(map[k]));
        if (ea.has_value() != eb.has_value()) {
          ok = false;
        } else if (ea) {
          if (ea->kind != eb->kind) ok = false;
          if (ok && ea->toward >= 0) {
            bool a_to_i = static_cast<std::size_t>(ea->toward) == i;
            bool b_to_j = static_cast<std::size_t>(eb->toward) == j;
            if (a_to_i != b_to_j) ok = false;
          }
        }
      }
      if (!ok) continue;
      used[j] = 1;
      map[i] = static_cast<int>(j);
      if (go(i + 1)) return true;
      used[j] = 0;
      map[i] = -1;
    }
    return false;
  };
  return go(0);
}

inline std::string to_dot(const Diagram& d) {
  std::ostringstream os;
  os << "graph diagram {\n";
  for (std::size_t i = 0; i < d.nodes.size(); ++i) {
    os << "  n" << i << " [label=\"" << d.nodes[i].label << "\", style=filled, fillcolor="
       << (d.nodes[i].fill == Fill::Black   ? "black"
           : d.nodes[i].fill == Fill::Gray ? "gray"
                                           : "white")
       << "];\n";
  }
  for (const auto& e : d.edges) {
    os << "  n" << e.i << " -- n" << e.j;
    std::string lbl = to_string(e.kind);
    if (e.kind == EdgeKind::Plain) {
      os << ";\n";
      continue;
    }
    os << " [label=\"" << lbl << "\"";
    if (e.toward >= 0) os << ", arrowto=\"n" << e.toward << "\"";
    os << "];\n";
  }
  os << "}\n";
  return os.str();
}

inline nlohmann::json to_json(const Diagram& d) {
  nlohmann::json j;
  j["nodes"] = nlohmann::json::array();
  for (const auto& n : d.nodes) j["nodes"].push_back({{"label", n.label}, {"fill", to_string(n.fill)}});
  j["edges"] = nlohmann::json::array();
  for (const auto& e : d.edges) {
    nlohmann::json je = {{"i", e.i}, {"j", e.j}, {"kind", to_string(e.kind)}};
    if (e.toward >= 0) je["toward"] = e.toward;
    j["edges"].push_back(je);
  }
  return j;
}

}  // namespace elliptic::diagram
