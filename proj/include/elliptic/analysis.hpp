#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "elliptic/diagram.hpp"
#include "elliptic/ers.hpp"

namespace elliptic::analysis {

using affine::Coset1;
using cosets::CosetSet;
using cosets::Point;
using ers::MarkedERS;
using geom::Vector;

// --- quotient membership helpers -------------------------------------------

// Is v/2 a root?
inline bool half_in(const MarkedERS& R, const Vector& v) { return R.contains(rat(1, 2) * v); }

// Is 2 v-bar in R/G (the class of 2v modulo the marking line R a)?
inline bool two_bar_in_quotient(const MarkedERS& R, const Vector& v) {
  const CosetSet* S = R.fiber(rat(2) * v.finite_part());
  return S != nullptr && !S->is_empty() && ers::fiber_has_b(*S, 2 * to_long(v.b));
}

// Is v-bar/2 in R/G?
inline bool half_bar_in_quotient(const MarkedERS& R, const Vector& v) {
  if (!is_integer(v.b / 2)) return false;
  const CosetSet* S = R.fiber(rat(1, 2) * v.finite_part());
  return S != nullptr && !S->is_empty() && ers::fiber_has_b(*S, to_long(v.b / 2));
}

// --- counting numbers, star, prime -----------------------------------------

// k(alpha) = min { k > 0 : alpha + k a in R }.
inline long counting_number(const MarkedERS& R, const Vector& alpha) {
  const CosetSet* S = R.fiber(alpha);
  if (S == nullptr || !R.contains(alpha))
    throw std::invalid_argument("counting_number: not a root");
  return cosets::min_positive_a_step(*S, {to_long(alpha.a), to_long(alpha.b)});
}

inline Vector star(const MarkedERS& R, const Vector& alpha) {
  return alpha + rat(counting_number(R, alpha)) * geom::basis_a(R.dim);
}

// alpha' : identity unless 2 alpha-bar in R/G, in which case it is the unique
// root 2 alpha + c a with c <= 0 whose star lies strictly above 2 alpha.
inline Vector prime_map(const MarkedERS& R, const Vector& alpha) {
  if (!two_bar_in_quotient(R, alpha)) return alpha;
  Vector twice = rat(2) * alpha;
  const CosetSet* S = R.fiber(twice);
  long period = S->lattice().p;
  for (long c = 0; c >= -2 * period; --c) {
    Vector cand = twice + rat(c) * geom::basis_a(R.dim);
    if (!R.contains(cand)) continue;
    if (c + counting_number(R, cand) > 0) return cand;
  }
  throw std::logic_error("prime_map: no admissible representative found");
}

// k^nr((alpha')^*) given alpha in Pi_dc.
inline Rational nr_counting_star(const MarkedERS& R, const Vector& alpha) {
  Vector pstar = star(R, prime_map(R, alpha));
  long k = counting_number(R, pstar);
  if (two_bar_in_quotient(R, alpha) && !R.contains(rat(2) * alpha)) return rat(k, 2);
  return rat(k);
}

// k^nr(alpha) for alpha in Pi_dc.
inline Rational nr_counting_dc(const MarkedERS& R, const Vector& alpha) {
  long k = counting_number(R, alpha);
  if (two_bar_in_quotient(R, alpha)) {
    Vector pstar = star(R, prime_map(R, alpha));
    if (!half_in(R, pstar)) return rat(k, 2);
  }
  return rat(k);
}

// --- affine simple systems of the quotients ---------------------------------

namespace detail {

// Affine roots (finite part, b-coefficient) of the quotient of R by the
// marking line, restricted to the dc part when `dc` is true.
inline std::map<Vector, Coset1> quotient_cosets(const MarkedERS& R) {
  std::map<Vector, Coset1> out;
  for (const auto& [g, S] : R.fibers)
    if (!S.is_empty()) out.emplace(g, ers::project_to_b(S));
  return out;
}

// Removes from C the integers n with n even and n/2 in D; the result must be
// empty or again an arithmetic progression.
inline std::optional<Coset1> coset1_remove_doubles(const Coset1& C, const Coset1& D) {
  long M = std::lcm(C.mod, 2 * D.mod);
  std::vector<long> keep;
  for (long n = 0; n < M; ++n)
    if (C.contains(n) && !(n % 2 == 0 && D.contains(n / 2))) keep.push_back(n);
  if (keep.empty()) return std::nullopt;
  long t = static_cast<long>(keep.size());
  if (M % t != 0) throw std::domain_error("coset1_remove_doubles: not a progression");
  long step = M / t;
  for (long i = 0; i < t; ++i)
    if (keep[i] != keep[0] + i * step)
      throw std::domain_error("coset1_remove_doubles: not a progression");
  return Coset1(step, keep[0]);
}

// The dc part of the affine quotient: classes (gamma, n) with (gamma/2, n/2)
// not an affine root.
inline std::map<Vector, Coset1> quotient_dc_cosets(const MarkedERS& R) {
  auto full = quotient_cosets(R);
  std::map<Vector, Coset1> out;
  for (const auto& [g, C] : full) {
    auto half = full.find(rat(1, 2) * g);
    if (half == full.end()) {
      out.emplace(g, C);
      continue;
    }
    if (auto kept = coset1_remove_doubles(C, half->second)) out.emplace(g, *kept);
  }
  return out;
}

// Simple system of an affine root system given by per-direction b-cosets.
// Type-agnostic: with positivity "b-coefficient first, then the finite
// order", a positive root is simple iff its reflection keeps every other
// positive root (except its own multiples) positive.
inline std::vector<Vector> affine_simple_system(const std::map<Vector, Coset1>& cosets,
                                                std::size_t dim) {
  long bound = 1;
  for (const auto& [g, C] : cosets) bound = std::max(bound, C.mod + C.off);
  bound *= 2;
  Vector zero(std::vector<Rational>(dim, Rational(0)), 0, 0);
  auto is_positive = [&](const Vector& v) {
    if (v.b != 0) return v.b > 0;
    Vector f = v;
    f.b = 0;
    return zero < f;
  };
  std::set<Vector> pos;
  for (const auto& [g, C] : cosets)
    for (long n = 0; n <= bound; ++n) {
      Vector v = g + rat(n) * geom::basis_b(dim);
      if (C.contains(n) && is_positive(v)) pos.insert(v);
    }
  std::vector<Vector> simple;
  for (const Vector& x : pos) {
    if (pos.count(rat(1, 2) * x)) continue;  // list only indivisible roots
    bool ok = true;
    for (const Vector& l : pos) {
      if (l == x || l == rat(2) * x) continue;
      if (!is_positive(geom::reflect(x, l))) {
        ok = false;
        break;
      }
    }
    if (ok) simple.push_back(x);
  }
  return simple;
}

}  // namespace detail

// --- paired simple system ----------------------------------------------------

struct PairedSimpleSystem {
  std::vector<Vector> dc;       // alpha_0 .. alpha_l (condition-respecting lifts)
  std::vector<Vector> mc;       // alpha_i'
  std::vector<Vector> mc_star;  // (alpha_i')^*
  std::vector<long> marks;      // n_i: sum n_i alpha_i-bar spans the b-line
  long delta_b_coeff = 0;       // sum n_i * (b-coefficient of alpha_i)
};

inline PairedSimpleSystem paired_simple_system(const MarkedERS& R) {
  PairedSimpleSystem out;
  MarkedERS Rdc = ers::reduce_dc(R);
  auto dc_cosets = detail::quotient_dc_cosets(R);
  auto affine_simple = detail::affine_simple_system(dc_cosets, R.dim);
  if (affine_simple.size() != R.finite_rank() + 1)
    throw std::domain_error("paired_simple_system: affine simple system has wrong size");
  // Order: the node with the largest b-coefficient first (alpha_0), the rest
  // in the deterministic finite order.
  std::sort(affine_simple.begin(), affine_simple.end(), [](const Vector& x, const Vector& y) {
    if (x.b != y.b) return x.b > y.b;
    return x < y;
  });
  // Lift each affine simple root into R, preferring representatives outside
  // half the long roots when such exist (so that primes move upward).
  for (const Vector& abar : affine_simple) {
    const CosetSet* S = R.fiber(abar);
    if (S == nullptr) throw std::logic_error("paired_simple_system: missing fiber");
    long n = to_long(abar.b);
    long period = S->lattice().p;
    auto in_R = [&](long m) { return S->contains({m, n}); };
    auto doubled = [&](long m) {
      return R.contains(rat(2) * (abar + rat(m) * geom::basis_a(R.dim)));
    };
    // Whether a lift is doubled varies with the a-period of the fiber over
    // twice the root, which can exceed the period of the fiber itself.
    long window = period;
    if (const CosetSet* S2 = R.fiber(rat(2) * abar))
      window = std::lcm(period, S2->lattice().p);
    bool prefer_undoubled = false;
    for (long m = 0; m < window; ++m)
      if (in_R(m) && !doubled(m)) prefer_undoubled = true;
    std::optional<long> pick;
    for (long step = 0; step <= 2 * window && !pick; ++step) {
      long m = (step % 2 == 0) ? -(step / 2) : (step + 1) / 2;
      if (!in_R(m)) continue;
      if (prefer_undoubled && doubled(m)) continue;
      Vector cand = abar + rat(m) * geom::basis_a(R.dim);
      if (!Rdc.contains(cand)) continue;
      pick = m;
    }
    if (!pick) throw std::logic_error("paired_simple_system: no admissible lift");
    out.dc.push_back(abar + rat(*pick) * geom::basis_a(R.dim));
  }
  for (const Vector& al : out.dc) {
    Vector pr = prime_map(R, al);
    out.mc.push_back(pr);
    out.mc_star.push_back(star(R, pr));
  }
  // Marks: the primitive positive integer null relation of the finite parts.
  {
    std::size_t n = out.dc.size();
    // Solve sum_i c_i * eps(alpha_i) = 0 by elimination over the rationals.
    std::vector<std::vector<Rational>> cols(n);
    for (std::size_t i = 0; i < n; ++i) cols[i] = out.dc[i].eps;
    std::vector<Rational> sol(n, Rational(0));
    // Gaussian elimination on the (dim x n) system; one free variable expected.
    std::size_t rows = R.dim;
    std::vector<std::vector<Rational>> Mx(rows, std::vector<Rational>(n, Rational(0)));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t r = 0; r < rows; ++r) Mx[r][i] = cols[i][r];
    std::vector<long> pivot_col(rows, -1);
    std::size_t rank = 0;
    for (std::size_t c = 0; c < n && rank < rows; ++c) {
      std::size_t piv = rows;
      for (std::size_t r = rank; r < rows; ++r)
        if (Mx[r][c] != 0) {
          piv = r;
          break;
        }
      if (piv == rows) continue;
      std::swap(Mx[rank], Mx[piv]);
      Rational inv = Rational(1) / Mx[rank][c];
      for (auto& x : Mx[rank]) x *= inv;
      for (std::size_t r = 0; r < rows; ++r) {
        if (r == rank || Mx[r][c] == 0) continue;
        Rational f = Mx[r][c];
        for (std::size_t j = 0; j < n; ++j) Mx[r][j] -= f * Mx[rank][j];
      }
      pivot_col[rank] = static_cast<long>(c);
      ++rank;
    }
    if (rank != n - 1)
      throw std::domain_error("paired_simple_system: null space dimension is not 1");
    // Free column: the one that is not a pivot.
    std::vector<char> is_pivot(n, 0);
    for (std::size_t r = 0; r < rank; ++r) is_pivot[pivot_col[r]] = 1;
    std::size_t free_c = 0;
    while (is_pivot[free_c]) ++free_c;
    sol[free_c] = 1;
    for (std::size_t r = 0; r < rank; ++r) sol[pivot_col[r]] = -Mx[r][free_c];
    // Scale to primitive positive integers.
    long lcm_den = 1;
    for (const auto& x : sol) lcm_den = std::lcm(lcm_den, static_cast<long>(x.get_den().get_si()));
    std::vector<long> mk;
    long g = 0;
    for (const auto& x : sol) {
      long v = to_long(rat(lcm_den) * x);
      mk.push_back(v);
      g = std::gcd(g, v);
    }
    for (auto& v : mk) v /= g;
    bool all_neg = std::all_of(mk.begin(), mk.end(), [](long v) { return v < 0; });
    if (all_neg)
      for (auto& v : mk) v = -v;
    for (long v : mk)
      if (v <= 0) throw std::domain_error("paired_simple_system: marks are not positive");
    out.marks = mk;
    Rational db(0);
    for (std::size_t i = 0; i < n; ++i) db += rat(out.marks[i]) * out.dc[i].b;
    out.delta_b_coeff = to_long(db);
  }
  return out;
}

// --- exponents and the elliptic diagram --------------------------------------

struct Analysis {
  PairedSimpleSystem pss;
  Rational norm_scale;             // c with I_R = c * I (shortest root norm 2)
  std::vector<Rational> exponents; // indexed like pss.dc
  Rational m_max;
  std::vector<std::size_t> gamma_m;  // dc indices with maximal exponent
  long coxeter_number = 1;           // 2 iff some node collapses, else 1
  std::vector<Vector> node_roots;    // dc nodes then stars of gamma_m
  std::vector<std::string> node_labels;
  std::vector<char> node_is_star;
  diagram::Diagram graph;
};

inline diagram::Fill node_fill(const MarkedERS& R, const Vector& v) {
  if (R.contains(rat(2) * v) || half_in(R, v)) return diagram::Fill::Black;
  if (two_bar_in_quotient(R, v) || half_bar_in_quotient(R, v)) return diagram::Fill::Gray;
  return diagram::Fill::White;
}

inline Analysis analyze(const MarkedERS& R) {
  Analysis A;
  A.pss = paired_simple_system(R);
  // Normalization: shortest root direction gets squared length 2.
  Rational min_norm(0);
  for (const auto& [g, S] : R.fibers) {
    if (S.is_empty()) continue;
    Rational n = geom::inner(g, g);
    if (min_norm == 0 || n < min_norm) min_norm = n;
  }
  A.norm_scale = Rational(2) / min_norm;
  const auto& dc = A.pss.dc;
  for (std::size_t i = 0; i < dc.size(); ++i) {
    Rational ir = A.norm_scale * geom::inner(dc[i], dc[i]);
    Rational knr = nr_counting_dc(R, dc[i]);
    A.exponents.push_back(ir * rat(A.pss.marks[i]) / (Rational(2) * knr));
  }
  A.m_max = *std::max_element(A.exponents.begin(), A.exponents.end());
  for (std::size_t i = 0; i < dc.size(); ++i)
    if (A.exponents[i] == A.m_max) A.gamma_m.push_back(i);
  A.coxeter_number = (A.gamma_m.size() < dc.size()) ? 2 : 1;
  // Nodes: all of Pi_dc, then (alpha_i')^* for i in gamma_m.
  for (std::size_t i = 0; i < dc.size(); ++i) {
    A.node_roots.push_back(dc[i]);
    A.node_labels.push_back("a" + std::to_string(i));
    A.node_is_star.push_back(0);
  }
  for (std::size_t i : A.gamma_m) {
    A.node_roots.push_back(A.pss.mc_star[i]);
    A.node_labels.push_back("a" + std::to_string(i) + "*");
    A.node_is_star.push_back(1);
  }
  for (std::size_t i = 0; i < A.node_roots.size(); ++i)
    A.graph.nodes.push_back({A.node_labels[i], node_fill(R, A.node_roots[i])});
  for (std::size_t i = 0; i < A.node_roots.size(); ++i)
    for (std::size_t j = i + 1; j < A.node_roots.size(); ++j)
      if (auto e = diagram::classify_edge(i, j, A.node_roots[i], A.node_roots[j]))
        A.graph.edges.push_back(*e);
  return A;
}

// --- Weyl orbits and the structural membership check ------------------------

namespace detail {
// Orbit of `seeds` under the reflections in `mirrors`, truncated to the box
// |a-coeff|, |b-coeff| <= box.
inline std::set<Vector> orbit_in_box(const std::vector<Vector>& seeds,
                                     const std::vector<Vector>& mirrors, long box) {
  std::set<Vector> seen(seeds.begin(), seeds.end());
  std::vector<Vector> stack(seeds.begin(), seeds.end());
  auto inside = [&](const Vector& v) {
    return abs(v.a) <= box && abs(v.b) <= box;
  };
  while (!stack.empty()) {
    Vector v = stack.back();
    stack.pop_back();
    for (const Vector& m : mirrors) {
      Vector w = geom::reflect(m, v);
      if (!inside(w) || seen.count(w)) continue;
      seen.insert(w);
      stack.push_back(w);
    }
  }
  return seen;
}
}  // namespace detail

// Orbits of the window roots under the reflections attached to the paired
// simple system.  Paths may pass through a larger box (3N + margin); the
// partition is exact for the tabulated systems at desk scale.
inline std::vector<std::vector<Vector>> w_orbits_window(const MarkedERS& R, long N) {
  Analysis A = analyze(R);
  std::vector<Vector> mirrors = A.pss.dc;
  for (const Vector& s : A.pss.mc_star) mirrors.push_back(s);
  long box = 3 * N + 6;
  std::vector<Vector> window = R.enumerate_window(N);
  std::map<Vector, int> cls;
  int next = 0;
  std::vector<std::vector<Vector>> orbits;
  for (const Vector& w : window) {
    if (cls.count(w)) continue;
    auto orb = detail::orbit_in_box({w}, mirrors, box);
    std::vector<Vector> members;
    for (const Vector& v : orb) {
      cls[v] = next;
      if (abs(v.a) <= N && abs(v.b) <= N) members.push_back(v);
    }
    orbits.push_back(std::move(members));
    ++next;
  }
  return orbits;
}

struct DescriptionCheck {
  bool ok = true;
  std::vector<std::string> notes;
};

// Verifies, inside the window, that R equals the union of the counting-layer
// tubes over the W[Pi_dc]-orbits of Pi_dc and of the starred complement.
inline DescriptionCheck description_R_check(const MarkedERS& R, long N) {
  DescriptionCheck out;
  Analysis A = analyze(R);
  long box = 3 * N + 6;
  auto orbit1 = detail::orbit_in_box(A.pss.dc, A.pss.dc, box);
  std::vector<Vector> extra;
  for (std::size_t i = 0; i < A.pss.dc.size(); ++i)
    if (!(A.pss.mc[i] == A.pss.dc[i])) extra.push_back(A.pss.mc_star[i]);
  auto orbit2 = extra.empty() ? std::set<Vector>{} : detail::orbit_in_box(extra, A.pss.dc, box);
  std::set<Vector> covered;
  auto spread = [&](const std::set<Vector>& orbit) {
    for (const Vector& g : orbit) {
      long k = counting_number(R, g);
      long ga = to_long(g.a);
      long lo = (-N - ga) / k - 1, hi = (N - ga) / k + 1;
      for (long t = lo; t <= hi; ++t) {
        Vector v = g + rat(t * k) * geom::basis_a(R.dim);
        if (abs(v.a) <= N && abs(v.b) <= N) {
          if (!R.contains(v)) {
            out.ok = false;
            out.notes.push_back("tube element outside R: " + geom::to_string(v));
          }
          covered.insert(v);
        }
      }
    }
  };
  spread(orbit1);
  spread(orbit2);
  for (const Vector& v : R.enumerate_window(N)) {
    if (!covered.count(v)) {
      out.ok = false;
      out.notes.push_back("root not covered by the description: " + geom::to_string(v));
    }
  }
  return out;
}

}  // namespace elliptic::analysis
