#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "elliptic/geometry.hpp"

namespace elliptic::finite {

using geom::Vector;

enum class FiniteType { A, B, C, D, E6, E7, E8, F4, G2, BC };

inline std::string to_string(FiniteType t) {
  switch (t) {
    case FiniteType::A: return "A";
    case FiniteType::B: return "B";
    case FiniteType::C: return "C";
    case FiniteType::D: return "D";
    case FiniteType::E6: return "E6";
    case FiniteType::E7: return "E7";
    case FiniteType::E8: return "E8";
    case FiniteType::F4: return "F4";
    case FiniteType::G2: return "G2";
    case FiniteType::BC: return "BC";
  }
  throw std::logic_error("unknown finite type");
}

inline FiniteType finite_type_from_string(const std::string& s) {
  if (s == "A") return FiniteType::A;
  if (s == "B") return FiniteType::B;
  if (s == "C") return FiniteType::C;
  if (s == "D") return FiniteType::D;
  if (s == "E6") return FiniteType::E6;
  if (s == "E7") return FiniteType::E7;
  if (s == "E8") return FiniteType::E8;
  if (s == "F4") return FiniteType::F4;
  if (s == "G2") return FiniteType::G2;
  if (s == "BC") return FiniteType::BC;
  throw std::invalid_argument("unknown finite type: " + s);
}

// Length class by norm rank: a single class is labeled Middle, two classes
// Short/Long, three (BC only) Short/Middle/Long.
enum class LengthClass { Short, Middle, Long };

inline std::string to_string(LengthClass c) {
  switch (c) {
    case LengthClass::Short: return "short";
    case LengthClass::Middle: return "middle";
    case LengthClass::Long: return "long";
  }
  throw std::logic_error("unknown length class");
}

struct FiniteRootSystem {
  FiniteType type;
  long rank = 0;
  std::vector<Vector> roots;         // sorted, closed under negation
  std::vector<Vector> simple_roots;  // alpha_1..alpha_rank
  std::vector<Rational> norms;       // distinct I(alpha,alpha), ascending
  std::map<Rational, LengthClass> class_of_norm;

  std::size_t dim() const { return simple_roots.at(0).dim(); }

  bool contains(const Vector& v) const {
    return std::binary_search(roots.begin(), roots.end(), v);
  }

  LengthClass length_class(const Vector& v) const {
    auto it = class_of_norm.find(geom::inner(v, v));
    if (it == class_of_norm.end()) throw std::invalid_argument("length_class: unknown norm");
    return it->second;
  }

  std::vector<Vector> roots_of_class(LengthClass c) const {
    std::vector<Vector> out;
    for (const auto& r : roots)
      if (length_class(r) == c) out.push_back(r);
    return out;
  }

  std::string name() const { return to_string(type) + "_" + std::to_string(rank); }
};

namespace detail {

inline void finalize(FiniteRootSystem& S) {
  std::sort(S.roots.begin(), S.roots.end());
  S.roots.erase(std::unique(S.roots.begin(), S.roots.end()), S.roots.end());
  std::set<Rational> ns;
  for (const auto& r : S.roots) ns.insert(geom::inner(r, r));
  S.norms.assign(ns.begin(), ns.end());
  if (S.norms.size() == 1) {
    S.class_of_norm[S.norms[0]] = LengthClass::Middle;
  } else if (S.norms.size() == 2) {
    S.class_of_norm[S.norms[0]] = LengthClass::Short;
    S.class_of_norm[S.norms[1]] = LengthClass::Long;
  } else if (S.norms.size() == 3) {
    S.class_of_norm[S.norms[0]] = LengthClass::Short;
    S.class_of_norm[S.norms[1]] = LengthClass::Middle;
    S.class_of_norm[S.norms[2]] = LengthClass::Long;
  } else {
    throw std::logic_error("finite system with >3 length classes");
  }
}

inline void add_with_negatives(std::vector<Vector>& roots, const Vector& v) {
  roots.push_back(v);
  roots.push_back(-v);
}

// Roots +-eps_i +- eps_j for i<j < bound.
inline void add_pm_pairs(std::vector<Vector>& roots, std::size_t dim, std::size_t bound) {
  for (std::size_t i = 0; i < bound; ++i)
    for (std::size_t j = i + 1; j < bound; ++j) {
      Vector ei = geom::unit_eps(dim, i), ej = geom::unit_eps(dim, j);
      add_with_negatives(roots, ei - ej);
      add_with_negatives(roots, ei + ej);
    }
}

// Half-sum roots 1/2 sum_i s_i eps_i over sign patterns with a parity
// constraint on the signs of the first `free_signs` coordinates; the
// remaining coordinates take the signs of `tail`.
inline void add_half_roots(std::vector<Vector>& roots, std::size_t dim, std::size_t free_signs,
                           const std::vector<int>& tail, int parity) {
  for (std::size_t mask = 0; mask < (1u << free_signs); ++mask) {
    int minus = 0;
    Vector v(std::vector<Rational>(dim, Rational(0)), 0, 0);
    for (std::size_t i = 0; i < free_signs; ++i) {
      bool neg = (mask >> i) & 1;
      minus += neg ? 1 : 0;
      v.eps[i] = neg ? rat(-1, 2) : rat(1, 2);
    }
    for (std::size_t i = free_signs; i < dim; ++i) v.eps[i] = rat(tail.at(i - free_signs), 2);
    if (minus % 2 != parity) continue;
    add_with_negatives(roots, v);
  }
}

}  // namespace detail

inline FiniteRootSystem build_finite(FiniteType type, long l) {
  FiniteRootSystem S;
  S.type = type;
  S.rank = l;
  auto chain = [&](std::size_t dim, long count) {
    for (long i = 0; i + 1 <= count; ++i)
      S.simple_roots.push_back(geom::unit_eps(dim, i) - geom::unit_eps(dim, i + 1));
  };
  switch (type) {
    case FiniteType::A: {
      if (l < 1) throw std::invalid_argument("A_l needs l >= 1");
      std::size_t dim = l + 1;
      for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = i + 1; j < dim; ++j)
          detail::add_with_negatives(S.roots, geom::unit_eps(dim, i) - geom::unit_eps(dim, j));
      chain(dim, l);
      break;
    }
    case FiniteType::B: {
      if (l < 2) throw std::invalid_argument("B_l needs l >= 2");
      std::size_t dim = l;
      detail::add_pm_pairs(S.roots, dim, dim);
      for (std::size_t i = 0; i < dim; ++i)
        detail::add_with_negatives(S.roots, geom::unit_eps(dim, i));
      chain(dim, l - 1);
      S.simple_roots.push_back(geom::unit_eps(dim, dim - 1));
      break;
    }
    case FiniteType::C: {
      if (l < 2) throw std::invalid_argument("C_l needs l >= 2");
      std::size_t dim = l;
      detail::add_pm_pairs(S.roots, dim, dim);
      for (std::size_t i = 0; i < dim; ++i)
        detail::add_with_negatives(S.roots, rat(2) * geom::unit_eps(dim, i));
      chain(dim, l - 1);
      S.simple_roots.push_back(rat(2) * geom::unit_eps(dim, dim - 1));
      break;
    }
    case FiniteType::D: {
      // D_2 = A_1 x A_1 and D_3 = A_3 are admitted with these coordinates.
      if (l < 2) throw std::invalid_argument("D_l needs l >= 2");
      std::size_t dim = l;
      detail::add_pm_pairs(S.roots, dim, dim);
      chain(dim, l - 1);
      S.simple_roots.push_back(geom::unit_eps(dim, dim - 2) + geom::unit_eps(dim, dim - 1));
      break;
    }
    case FiniteType::E6: {
      if (l != 6) throw std::invalid_argument("E6 has rank 6");
      detail::add_pm_pairs(S.roots, 8, 5);
      detail::add_half_roots(S.roots, 8, 5, {-1, -1, 1}, 0);  // tail -e6 -e7 +e8
      Vector a1(std::vector<Rational>(8, rat(-1, 2)), 0, 0);
      a1.eps[0] = rat(1, 2);
      a1.eps[7] = rat(1, 2);
      S.simple_roots.push_back(a1);
      S.simple_roots.push_back(geom::unit_eps(8, 0) + geom::unit_eps(8, 1));
      for (long i = 3; i <= 6; ++i)
        S.simple_roots.push_back(geom::unit_eps(8, i - 2) - geom::unit_eps(8, i - 3));
      break;
    }
    case FiniteType::E7: {
      if (l != 7) throw std::invalid_argument("E7 has rank 7");
      detail::add_pm_pairs(S.roots, 8, 6);
      detail::add_with_negatives(S.roots, geom::unit_eps(8, 6) - geom::unit_eps(8, 7));
      detail::add_half_roots(S.roots, 8, 6, {-1, 1}, 1);  // tail -e7 +e8, odd minuses
      Vector a1(std::vector<Rational>(8, rat(-1, 2)), 0, 0);
      a1.eps[0] = rat(1, 2);
      a1.eps[7] = rat(1, 2);
      S.simple_roots.push_back(a1);
      S.simple_roots.push_back(geom::unit_eps(8, 0) + geom::unit_eps(8, 1));
      for (long i = 3; i <= 7; ++i)
        S.simple_roots.push_back(geom::unit_eps(8, i - 2) - geom::unit_eps(8, i - 3));
      break;
    }
    case FiniteType::E8: {
      if (l != 8) throw std::invalid_argument("E8 has rank 8");
      detail::add_pm_pairs(S.roots, 8, 8);
      detail::add_half_roots(S.roots, 8, 8, {}, 0);
      Vector a1(std::vector<Rational>(8, rat(-1, 2)), 0, 0);
      a1.eps[0] = rat(1, 2);
      a1.eps[7] = rat(1, 2);
      S.simple_roots.push_back(a1);
      S.simple_roots.push_back(geom::unit_eps(8, 0) + geom::unit_eps(8, 1));
      for (long i = 3; i <= 8; ++i)
        S.simple_roots.push_back(geom::unit_eps(8, i - 2) - geom::unit_eps(8, i - 3));
      break;
    }
    case FiniteType::F4: {
      if (l != 4) throw std::invalid_argument("F4 has rank 4");
      detail::add_pm_pairs(S.roots, 4, 4);
      for (std::size_t i = 0; i < 4; ++i)
        detail::add_with_negatives(S.roots, geom::unit_eps(4, i));
      for (std::size_t mask = 0; mask < 8; ++mask) {
        Vector v(std::vector<Rational>(4, rat(1, 2)), 0, 0);
        for (std::size_t i = 0; i < 3; ++i)
          if ((mask >> i) & 1) v.eps[i + 1] = rat(-1, 2);
        detail::add_with_negatives(S.roots, v);
      }
      S.simple_roots = {geom::unit_eps(4, 1) - geom::unit_eps(4, 2),
                        geom::unit_eps(4, 2) - geom::unit_eps(4, 3), geom::unit_eps(4, 3),
                        Vector({rat(1, 2), rat(-1, 2), rat(-1, 2), rat(-1, 2)}, 0, 0)};
      break;
    }
    case FiniteType::G2: {
      if (l != 2) throw std::invalid_argument("G2 has rank 2");
      for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = i + 1; j < 3; ++j)
          detail::add_with_negatives(S.roots, geom::unit_eps(3, i) - geom::unit_eps(3, j));
      Vector sum = geom::unit_eps(3, 0) + geom::unit_eps(3, 1) + geom::unit_eps(3, 2);
      for (std::size_t i = 0; i < 3; ++i)
        detail::add_with_negatives(S.roots, rat(3) * geom::unit_eps(3, i) - sum);
      S.simple_roots = {geom::unit_eps(3, 0) - geom::unit_eps(3, 1),
                        rat(-2) * geom::unit_eps(3, 0) + geom::unit_eps(3, 1) +
                            geom::unit_eps(3, 2)};
      break;
    }
    case FiniteType::BC: {
      if (l < 1) throw std::invalid_argument("BC_l needs l >= 1");
      std::size_t dim = l;
      detail::add_pm_pairs(S.roots, dim, dim);
      for (std::size_t i = 0; i < dim; ++i) {
        detail::add_with_negatives(S.roots, geom::unit_eps(dim, i));
        detail::add_with_negatives(S.roots, rat(2) * geom::unit_eps(dim, i));
      }
      chain(dim, l - 1);
      S.simple_roots.push_back(geom::unit_eps(dim, dim - 1));
      break;
    }
  }
  detail::finalize(S);
  return S;
}

// BFS closure of each root under the reflections by all simple roots.
inline std::vector<std::vector<Vector>> finite_weyl_orbits(const FiniteRootSystem& S) {
  std::set<Vector> seen;
  std::vector<std::vector<Vector>> orbits;
  for (const auto& start : S.roots) {
    if (seen.count(start)) continue;
    std::vector<Vector> orbit = {start};
    seen.insert(start);
    for (std::size_t k = 0; k < orbit.size(); ++k) {
      for (const auto& s : S.simple_roots) {
        Vector img = geom::reflect(s, orbit[k]);
        if (!seen.count(img)) {
          seen.insert(img);
          orbit.push_back(img);
        }
      }
    }
    std::sort(orbit.begin(), orbit.end());
    orbits.push_back(std::move(orbit));
  }
  return orbits;
}

struct AxiomReport {
  bool reflection_closed = true;
  bool pairings_integral = true;
  bool full_rank = true;
  bool irreducible = true;
  bool ok() const { return reflection_closed && pairings_integral && full_rank && irreducible; }
};

// Checks the root-system axioms on an explicit finite root set: closure of the
// set under all its own reflections, integrality of all pairings, span of the
// expected rank, and connectivity of the nonzero-pairing graph.
inline AxiomReport verify_finite_axioms(const std::vector<Vector>& roots, long expected_rank,
                                        bool require_irreducible = true) {
  AxiomReport rep;
  auto contains = [&](const Vector& v) {
    return std::find(roots.begin(), roots.end(), v) != roots.end();
  };
  for (const auto& a : roots) {
    for (const auto& b : roots) {
      Rational p = geom::pairing(a, b);
      if (!is_integer(p) || p < -4 || p > 4) rep.pairings_integral = false;
      if (!contains(geom::reflect(a, b))) rep.reflection_closed = false;
    }
  }
  // Rank of the span via exact Gaussian elimination on eps coordinates.
  std::vector<std::vector<Rational>> rows;
  for (const auto& r : roots) rows.push_back(r.eps);
  long rank = 0;
  std::size_t cols = rows.empty() ? 0 : rows[0].size();
  for (std::size_t c = 0, rix = 0; c < cols && rix < rows.size(); ++c) {
    std::size_t piv = rix;
    while (piv < rows.size() && rows[piv][c] == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[rix], rows[piv]);
    for (std::size_t k = rix + 1; k < rows.size(); ++k) {
      if (rows[k][c] == 0) continue;
      Rational f = rows[k][c] / rows[rix][c];
      for (std::size_t cc = c; cc < cols; ++cc) rows[k][cc] -= f * rows[rix][cc];
    }
    ++rix;
    ++rank;
  }
  rep.full_rank = (rank == expected_rank);
  if (require_irreducible && !roots.empty()) {
    // Connectivity of the graph with edges where I(a,b) != 0.
    std::vector<char> vis(roots.size(), 0);
    std::vector<std::size_t> stack = {0};
    vis[0] = 1;
    while (!stack.empty()) {
      std::size_t i = stack.back();
      stack.pop_back();
      for (std::size_t j = 0; j < roots.size(); ++j)
        if (!vis[j] && geom::inner(roots[i], roots[j]) != 0) {
          vis[j] = 1;
          stack.push_back(j);
        }
    }
    rep.irreducible = std::all_of(vis.begin(), vis.end(), [](char v) { return v != 0; });
  }
  return rep;
}

}  // namespace elliptic::finite
