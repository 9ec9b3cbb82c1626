#pragma once

#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "elliptic/affine.hpp"
#include "elliptic/coset.hpp"
#include "elliptic/finite.hpp"
#include "elliptic/geometry.hpp"

namespace elliptic::ers {

using affine::Coset1;
using cosets::CosetSet;
using cosets::Lattice2;
using cosets::Point;
using finite::FiniteRootSystem;
using finite::LengthClass;
using geom::Vector;

// --- coset-set helpers ------------------------------------------------------

// Scalar multiple c * S for a nonzero integer c.
inline CosetSet scale_set(const CosetSet& S, long c) {
  if (c == 0) throw std::invalid_argument("scale_set: zero scalar");
  cosets::AffineMap f;
  f.M = {Rational(c), Rational(0), Rational(0), Rational(c)};
  return cosets::affine_image(S, f);
}

// Minkowski sum A + B = { x + y : x in A, y in B }.
inline CosetSet minkowski_sum(const CosetSet& A, const CosetSet& B) {
  if (A.is_empty() || B.is_empty()) return CosetSet::empty();
  const Lattice2 &La = A.lattice(), &Lb = B.lattice();
  Lattice2 L = cosets::hnf({{La.p, 0}, {La.q, La.r}, {Lb.p, 0}, {Lb.q, Lb.r}});
  std::vector<Point> offs;
  for (const Point& x : A.offsets())
    for (const Point& y : B.offsets()) offs.push_back({x.m + y.m, x.n + y.n});
  return CosetSet::make(L, std::move(offs));
}

// Does the set contain a point with the given b-coefficient (n coordinate)?
inline bool fiber_has_b(const CosetSet& S, long n) {
  long r = S.lattice().r;
  for (const Point& o : S.offsets())
    if ((n - o.n) % r == 0) return true;
  return false;
}

// Does the set contain a point with the given a-coefficient (m coordinate)?
inline bool fiber_has_a(const CosetSet& S, long m) {
  const Lattice2& L = S.lattice();
  long g = std::gcd(L.p, L.q);
  for (const Point& o : S.offsets())
    if (g == 0 ? o.m == m : (m - o.m) % g == 0) return true;
  return false;
}

namespace detail {
// Projection of a coset set onto one coordinate; the image is a union of
// residue classes mod `period`, which must form a single arithmetic
// progression (it always does for the systems handled here).
inline Coset1 project(const std::vector<long>& values, long period) {
  std::set<long> res;
  for (long v : values) res.insert(((v % period) + period) % period);
  std::vector<long> rs(res.begin(), res.end());
  long t = static_cast<long>(rs.size());
  if (period % t != 0)
    throw std::domain_error("project: image is not an arithmetic progression");
  long step = period / t;
  for (long i = 0; i < t; ++i)
    if (rs[i] != rs[0] + i * step)
      throw std::domain_error("project: image is not an arithmetic progression");
  return Coset1(step, rs[0]);
}
}  // namespace detail

inline Coset1 project_to_b(const CosetSet& S) {
  if (S.is_empty()) throw std::invalid_argument("project_to_b: empty set");
  std::vector<long> ns;
  for (const Point& o : S.offsets()) ns.push_back(o.n);
  return detail::project(ns, S.lattice().r);
}

inline Coset1 project_to_a(const CosetSet& S) {
  if (S.is_empty()) throw std::invalid_argument("project_to_a: empty set");
  const Lattice2& L = S.lattice();
  long g = std::gcd(L.p, L.q);
  std::vector<long> ms;
  for (const Point& o : S.offsets()) ms.push_back(o.m);
  return detail::project(ms, g);
}

// --- integer lattice utilities ---------------------------------------------

namespace detail {

// Row echelon form over the integers (Hermite-style), pivots left to right.
// Rows are modified in place; returns the echelonized rows (zero rows dropped).
inline std::vector<std::vector<long>> int_echelon(std::vector<std::vector<long>> rows) {
  if (rows.empty()) return rows;
  std::size_t cols = rows[0].size();
  std::size_t top = 0;
  for (std::size_t c = 0; c < cols && top < rows.size(); ++c) {
    // Eliminate column c below `top` by gcd combinations.
    while (true) {
      std::size_t best = rows.size();
      for (std::size_t i = top; i < rows.size(); ++i)
        if (rows[i][c] != 0 && (best == rows.size() ||
                                std::abs(rows[i][c]) < std::abs(rows[best][c])))
          best = i;
      if (best == rows.size()) break;  // column already zero below top
      std::swap(rows[top], rows[best]);
      bool all_divisible = true;
      for (std::size_t i = top + 1; i < rows.size(); ++i) {
        if (rows[i][c] == 0) continue;
        long q = rows[i][c] / rows[top][c];
        for (std::size_t j = 0; j < cols; ++j) rows[i][j] -= q * rows[top][j];
        if (rows[i][c] != 0) all_divisible = false;
      }
      if (all_divisible) break;
    }
    if (rows[top][c] != 0) {
      if (rows[top][c] < 0)
        for (auto& x : rows[top]) x = -x;
      ++top;
    }
  }
  rows.resize(top);
  return rows;
}

}  // namespace detail

// --- the marked system ------------------------------------------------------

struct AxiomReport {
  bool spans_full_rank = false;    // R1: Q(R) has rank l + 2
  bool no_isotropic = true;        // R2
  bool reflection_closed = true;   // R3
  bool integral_pairings = true;   // R4 (values in Z, |.| <= 4)
  bool irreducible = true;         // R5
  bool negation_closed = true;
  std::vector<std::string> notes;
  bool ok() const {
    return spans_full_rank && no_isotropic && reflection_closed && integral_pairings &&
           irreducible && negation_closed;
  }
};

struct RadicalData {
  Vector delta_b;       // generator of (Q(R) cap rad) / (Q(R) cap Ra)
  Vector a_gen;         // generator of Q(R) cap Ra
  bool marking_primitive = false;  // a_gen == a
};

// A root system in F = <eps> (+) <b> (+) <a>, stored fiberwise: for each
// finite part gamma the set of radical offsets (m, n) with
// gamma + m a + n b in R.  The marking is G = R a.
struct MarkedERS {
  std::size_t dim = 0;                 // eps dimension of the ambient space
  std::map<Vector, CosetSet> fibers;   // key: finite part (a = b = 0)

  bool contains(const Vector& v) const {
    if (!is_integer(v.a) || !is_integer(v.b)) return false;
    auto it = fibers.find(v.finite_part());
    if (it == fibers.end()) return false;
    return it->second.contains({to_long(v.a), to_long(v.b)});
  }

  const CosetSet* fiber(const Vector& fin) const {
    auto it = fibers.find(fin.finite_part());
    return it == fibers.end() ? nullptr : &it->second;
  }

  std::vector<Vector> enumerate_window(long N) const {
    std::vector<Vector> out;
    for (const auto& [g, S] : fibers)
      for (const Point& x : cosets::enumerate_box(S, N))
        out.push_back(g + rat(x.m) * geom::basis_a(dim) + rat(x.n) * geom::basis_b(dim));
    std::sort(out.begin(), out.end());
    return out;
  }

  // Rows generating Q(R) over Z, in coordinates (eps_1..eps_d, b, a).
  std::vector<std::vector<Rational>> lattice_generators() const {
    std::vector<std::vector<Rational>> rows;
    auto row = [&](const Vector& fin, const Rational& bb, const Rational& aa) {
      std::vector<Rational> r = fin.eps;
      r.push_back(bb);
      r.push_back(aa);
      rows.push_back(std::move(r));
    };
    Vector zero(std::vector<Rational>(dim, Rational(0)), 0, 0);
    for (const auto& [g, S] : fibers) {
      if (S.is_empty()) continue;
      const Lattice2& L = S.lattice();
      const Point& o0 = S.offsets().front();
      row(g, rat(o0.n), rat(o0.m));
      row(zero, 0, rat(L.p));
      row(zero, rat(L.r), rat(L.q));
      for (const Point& o : S.offsets()) row(zero, rat(o.n - o0.n), rat(o.m - o0.m));
    }
    return rows;
  }

  RadicalData radical_data() const {
    auto gens = lattice_generators();
    // Clear denominators (a factor of 2 suffices for every realization here;
    // use the true lcm to stay exact).
    long den = 1;
    for (const auto& r : gens)
      for (const auto& x : r) den = std::lcm(den, static_cast<long>(x.get_den().get_si()));
    std::vector<std::vector<long>> irows;
    for (const auto& r : gens) {
      std::vector<long> ir;
      for (const auto& x : r) ir.push_back(to_long(rat(den) * x));
      irows.push_back(std::move(ir));
    }
    auto ech = detail::int_echelon(std::move(irows));
    // Rows supported only on the (b, a) columns generate den * (Q cap rad).
    std::size_t d = dim;
    std::vector<std::vector<long>> rad_rows;
    for (const auto& r : ech) {
      bool pure = true;
      for (std::size_t j = 0; j < d; ++j)
        if (r[j] != 0) pure = false;
      if (pure) rad_rows.push_back({r[d], r[d + 1]});  // (b, a)
    }
    auto rad = detail::int_echelon(std::move(rad_rows));
    if (rad.size() != 2)
      throw std::domain_error("radical_data: Q(R) cap rad does not have rank 2");
    // rad[0] = (rb, ra) with rb > 0; rad[1] = (0, p) with p > 0.
    if (rad[1][0] != 0) throw std::logic_error("radical_data: echelon shape");
    RadicalData out;
    if (rad[0][0] % den != 0 || rad[0][1] % den != 0 || rad[1][1] % den != 0)
      throw std::domain_error("radical_data: radical lattice not integral");
    long rb = rad[0][0] / den, ra = rad[0][1] / den, p = rad[1][1] / den;
    ra = ((ra % p) + p) % p;  // reduce mod Q cap Ra
    out.delta_b = rat(rb) * geom::basis_b(dim) + rat(ra) * geom::basis_a(dim);
    out.a_gen = rat(p) * geom::basis_a(dim);
    out.marking_primitive = (p == 1);
    return out;
  }

  // Rank of Q(R) as a lattice in F (should be l + 2 for an elliptic system).
  std::size_t lattice_rank() const {
    auto gens = lattice_generators();
    std::size_t rank = 0, cols = dim + 2;
    for (std::size_t c = 0; c < cols; ++c) {
      std::size_t piv = gens.size();
      for (std::size_t i = rank; i < gens.size(); ++i)
        if (gens[i][c] != 0) {
          piv = i;
          break;
        }
      if (piv == gens.size()) continue;
      std::swap(gens[rank], gens[piv]);
      for (std::size_t i = rank + 1; i < gens.size(); ++i) {
        if (gens[i][c] == 0) continue;
        Rational f = gens[i][c] / gens[rank][c];
        for (std::size_t j = c; j < cols; ++j) gens[i][j] -= f * gens[rank][j];
      }
      ++rank;
    }
    return rank;
  }

  // Rank of the span of the finite parts (the rank l of the quotient).
  std::size_t finite_rank() const {
    std::vector<std::vector<Rational>> rows;
    for (const auto& [g, S] : fibers)
      if (!S.is_empty()) rows.push_back(g.eps);
    std::size_t rank = 0, cols = dim;
    for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
      std::size_t piv = rows.size();
      for (std::size_t i = rank; i < rows.size(); ++i)
        if (rows[i][c] != 0) {
          piv = i;
          break;
        }
      if (piv == rows.size()) continue;
      std::swap(rows[rank], rows[piv]);
      for (std::size_t i = rank + 1; i < rows.size(); ++i) {
        if (rows[i][c] == 0) continue;
        Rational f = rows[i][c] / rows[rank][c];
        for (std::size_t j = c; j < cols; ++j) rows[i][j] -= f * rows[rank][j];
      }
      ++rank;
    }
    return rank;
  }

  AxiomReport verify_axioms() const {
    AxiomReport rep;
    // R2: every fiber key must be anisotropic (radical parts never contribute).
    for (const auto& [g, S] : fibers) {
      if (S.is_empty()) continue;
      if (geom::is_isotropic(g)) {
        rep.no_isotropic = false;
        rep.notes.push_back("isotropic root direction: " + geom::to_string(g));
      }
    }
    // Negation closure: fiber(-g) = -fiber(g).
    for (const auto& [g, S] : fibers) {
      if (S.is_empty()) continue;
      auto it = fibers.find(-g);
      if (it == fibers.end() || !(scale_set(S, -1) == it->second)) {
        rep.negation_closed = false;
        rep.notes.push_back("not closed under negation at " + geom::to_string(g));
      }
    }
    // R4 and R3, fiber pair by fiber pair (exact, not window-limited).
    for (const auto& [g1, S1] : fibers) {
      if (S1.is_empty()) continue;
      for (const auto& [g2, S2] : fibers) {
        if (S2.is_empty()) continue;
        Rational p = geom::pairing(g1, g2);
        if (!is_integer(p) || abs(p) > 4) {
          rep.integral_pairings = false;
          rep.notes.push_back("bad pairing between " + geom::to_string(g1) + " and " +
                              geom::to_string(g2));
          continue;
        }
        long pl = to_long(p);
        Vector tgt = geom::reflect(g1, g2).finite_part();
        auto it = fibers.find(tgt);
        const CosetSet* T = it == fibers.end() ? nullptr : &it->second;
        CosetSet img = pl == 0 ? S2 : minkowski_sum(S2, scale_set(S1, -pl));
        if (T == nullptr || !cosets::set_subset(img, *T)) {
          rep.reflection_closed = false;
          rep.notes.push_back("reflection of fiber " + geom::to_string(g2) + " by " +
                              geom::to_string(g1) + " leaves the system");
        }
      }
    }
    // R1.
    try {
      rep.spans_full_rank = (lattice_rank() == finite_rank() + 2) && radical_data().delta_b.b > 0;
    } catch (const std::exception& e) {
      rep.spans_full_rank = false;
      rep.notes.push_back(e.what());
    }
    // R5: connectivity of the finite directions under the inner product.
    std::vector<Vector> keys;
    for (const auto& [g, S] : fibers)
      if (!S.is_empty()) keys.push_back(g);
    if (!keys.empty()) {
      std::vector<char> seen(keys.size(), 0);
      std::vector<std::size_t> stack = {0};
      seen[0] = 1;
      while (!stack.empty()) {
        std::size_t i = stack.back();
        stack.pop_back();
        for (std::size_t j = 0; j < keys.size(); ++j)
          if (!seen[j] && geom::inner(keys[i], keys[j]) != 0) {
            seen[j] = 1;
            stack.push_back(j);
          }
      }
      for (char s : seen)
        if (!s) rep.irreducible = false;
    }
    return rep;
  }
};

// Builds a system from a finite base and one radical coset set per length
// class (the shape of every tabulated family).
inline MarkedERS from_layers(const FiniteRootSystem& base,
                             const std::vector<std::pair<LengthClass, CosetSet>>& layers) {
  MarkedERS R;
  R.dim = base.dim();
  for (const auto& [cls, S] : layers) {
    if (S.is_empty()) continue;
    for (const Vector& g : base.roots_of_class(cls)) {
      if (R.fibers.count(g)) throw std::invalid_argument("from_layers: duplicate layer class");
      R.fibers[g] = S;
    }
  }
  return R;
}

// --- quotients ---------------------------------------------------------------

// Layers of the affine quotient R / (R a): finite roots with b-coefficient
// cosets.  Pass to affine::identify_affine for recognition.
inline std::vector<std::pair<std::vector<Vector>, Coset1>> quotient_by_a(const MarkedERS& R) {
  std::map<Coset1, std::vector<Vector>> grouped;
  for (const auto& [g, S] : R.fibers) {
    if (S.is_empty()) continue;
    grouped[project_to_b(S)].push_back(g);
  }
  std::vector<std::pair<std::vector<Vector>, Coset1>> out;
  for (auto& [c, roots] : grouped) out.push_back({std::move(roots), c});
  return out;
}

// Layers of the affine quotient R / (R delta_b), with the a-coefficient coset
// reported in the Coset1 slot (the quotient is an affine system "in the a
// direction").
inline std::vector<std::pair<std::vector<Vector>, Coset1>> quotient_by_b(const MarkedERS& R) {
  std::map<Coset1, std::vector<Vector>> grouped;
  for (const auto& [g, S] : R.fibers) {
    if (S.is_empty()) continue;
    grouped[project_to_a(S)].push_back(g);
  }
  std::vector<std::pair<std::vector<Vector>, Coset1>> out;
  for (auto& [c, roots] : grouped) out.push_back({std::move(roots), c});
  return out;
}

// The finite quotient R / rad: just the set of finite directions.
inline std::vector<Vector> quotient_full(const MarkedERS& R) {
  std::vector<Vector> out;
  for (const auto& [g, S] : R.fibers)
    if (!S.is_empty()) out.push_back(g);
  std::sort(out.begin(), out.end());
  return out;
}

// Identifies the finite quotient against the standard realizations.
inline std::pair<finite::FiniteType, long> identify_finite(const std::vector<Vector>& roots) {
  if (roots.empty()) throw std::invalid_argument("identify_finite: empty");
  std::vector<Vector> all = roots;
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  long dl = static_cast<long>(all.at(0).dim());
  std::vector<std::pair<finite::FiniteType, long>> candidates = {
      {finite::FiniteType::A, dl - 1}, {finite::FiniteType::B, dl},
      {finite::FiniteType::C, dl},     {finite::FiniteType::D, dl},
      {finite::FiniteType::BC, dl}};
  if (dl == 8) {
    candidates.push_back({finite::FiniteType::E6, 6});
    candidates.push_back({finite::FiniteType::E7, 7});
    candidates.push_back({finite::FiniteType::E8, 8});
  }
  if (dl == 4) candidates.push_back({finite::FiniteType::F4, 4});
  if (dl == 3) candidates.push_back({finite::FiniteType::G2, 2});
  for (auto [ft, fl] : candidates) {
    if (fl < 1) continue;
    try {
      if (finite::build_finite(ft, fl).roots == all) return {ft, fl};
    } catch (const std::invalid_argument&) {
    }
  }
  throw std::invalid_argument("identify_finite: not a standard realization");
}

// The two reduction companions R^dc = { a in R : a/2 not in R } and
// R^mc = { a in R : 2a not in R }, computed fiberwise.
inline MarkedERS reduce_dc(const MarkedERS& R) {
  MarkedERS out;
  out.dim = R.dim;
  for (const auto& [g, S] : R.fibers) {
    if (S.is_empty()) continue;
    Vector half = rat(1, 2) * g;
    auto it = R.fibers.find(half);
    CosetSet keep = S;
    if (it != R.fibers.end() && !it->second.is_empty())
      keep = cosets::set_difference(S, scale_set(it->second, 2));
    if (!keep.is_empty()) out.fibers[g] = keep;
  }
  return out;
}

inline MarkedERS reduce_mc(const MarkedERS& R) {
  MarkedERS out;
  out.dim = R.dim;
  CosetSet even = cosets::product_set(0, 2, 0, 2);
  for (const auto& [g, S] : R.fibers) {
    if (S.is_empty()) continue;
    Vector dbl = rat(2) * g;
    auto it = R.fibers.find(dbl);
    CosetSet keep = S;
    if (it != R.fibers.end() && !it->second.is_empty()) {
      // x is removed when 2x lies in the fiber over 2g.
      CosetSet halves = cosets::set_intersect(it->second, even);
      if (!halves.is_empty()) {
        cosets::AffineMap f;
        f.M = {rat(1, 2), Rational(0), Rational(0), rat(1, 2)};
        keep = cosets::set_difference(S, cosets::affine_image(halves, f));
      }
    }
    if (!keep.is_empty()) out.fibers[g] = keep;
  }
  return out;
}

}  // namespace elliptic::ers
