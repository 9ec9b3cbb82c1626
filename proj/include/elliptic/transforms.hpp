#pragma once

#include <algorithm>
#include <array>
#include <cstdlib>
#include <deque>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "elliptic/analysis.hpp"
#include "elliptic/diagram.hpp"
#include "elliptic/ers.hpp"

namespace elliptic::transforms {

using cosets::CosetSet;
using cosets::Lattice2;
using cosets::Point;
using ers::MarkedERS;
using geom::Vector;

// ---------------------------------------------------------------------------
// Radical transforms
// ---------------------------------------------------------------------------

// A linear map of the ambient space that permutes (with signs) the finite
// coordinates, acts on the radical plane by an invertible rational matrix,
// and shears finite vectors into the radical.  With radical = [[p, q], [r, s]]
// the basis vectors map as  b |-> p b + r a  and  a |-> q b + s a,  and a
// finite unit vector e_i maps as
//   e_i |-> sign_i e_{perm_i} + shear_a a + shear_b b.
// The map fixes the marking line (is "marked") exactly when q == 0.
struct RadicalTransform {
  std::vector<long> eps_perm;       // empty: identity permutation
  std::vector<long> eps_sign;      // empty: all +1
  std::array<Rational, 4> radical{rat(1), rat(0), rat(0), rat(1)};  // [[p,q],[r,s]]
  Rational shear_a = rat(0);
  Rational shear_b = rat(0);

  bool is_marked() const { return radical[1] == 0; }

  static RadicalTransform identity() { return {}; }

  // Exchange the two radical generators b and a.
  static RadicalTransform swap_ab() {
    RadicalTransform t;
    t.radical = {rat(0), rat(1), rat(1), rat(0)};
    return t;
  }

  // a |-> a + k b, fixing b (moves the marking line unless k = 0).
  static RadicalTransform chi_T(long k) {
    RadicalTransform t;
    t.radical = {rat(1), rat(k), rat(0), rat(1)};
    return t;
  }

  // b |-> b + k a, fixing a (marked for every k).
  static RadicalTransform chi_tT(const Rational& k) {
    RadicalTransform t;
    t.radical = {rat(1), rat(0), k, rat(1)};
    return t;
  }

  // Shear u |-> u + s(u) (da a + db b), with s(u) the sum of the finite
  // coordinates of u.  Fixes the radical pointwise, hence always marked.
  static RadicalTransform tau(const Rational& da, const Rational& db) {
    RadicalTransform t;
    t.shear_a = da;
    t.shear_b = db;
    return t;
  }

  // Rescale the radical generators independently.
  static RadicalTransform scale(const Rational& b_factor, const Rational& a_factor) {
    RadicalTransform t;
    t.radical = {b_factor, rat(0), rat(0), a_factor};
    return t;
  }
};

namespace detail {

inline Vector map_finite(const RadicalTransform& T, const Vector& g) {
  if (T.eps_perm.empty() && T.eps_sign.empty()) return g.finite_part();
  std::size_t d = g.eps.size();
  if ((!T.eps_perm.empty() && T.eps_perm.size() != d) ||
      (!T.eps_sign.empty() && T.eps_sign.size() != d))
    throw std::invalid_argument("RadicalTransform: finite permutation size mismatch");
  Vector out;
  out.eps.assign(d, rat(0));
  for (std::size_t i = 0; i < d; ++i) {
    std::size_t j = T.eps_perm.empty() ? i : static_cast<std::size_t>(T.eps_perm[i]);
    long sg = T.eps_sign.empty() ? 1 : T.eps_sign[i];
    if (j >= d || (sg != 1 && sg != -1))
      throw std::invalid_argument("RadicalTransform: bad finite permutation entry");
    out.eps[j] += rat(sg) * g.eps[i];
  }
  return out;
}

inline Rational coord_sum(const Vector& v) {
  Rational s = 0;
  for (const auto& c : v.eps) s += c;
  return s;
}

}  // namespace detail

// Image of a marked system under a radical transform.  Throws
// std::domain_error when some layer has a non-integral image (the transform
// does not extend to the system).
inline MarkedERS apply(const RadicalTransform& T, const MarkedERS& R) {
  const auto& M = T.radical;  // p = M[0], q = M[1], r = M[2], s = M[3]
  MarkedERS out;
  out.dim = R.dim;
  for (const auto& [g, S] : R.fibers) {
    if (S.is_empty()) continue;
    Vector g2 = detail::map_finite(T, g);
    Rational sg = detail::coord_sum(g2);
    cosets::AffineMap f;
    // radical coordinates (m, n) of m a + n b:  m' = s m + r n, n' = q m + p n
    f.M = {M[3], M[2], M[1], M[0]};
    f.t = {sg * T.shear_a, sg * T.shear_b};
    CosetSet img = cosets::affine_image(S, f);
    auto [it, fresh] = out.fibers.emplace(g2, img);
    if (!fresh && !(it->second == img))
      throw std::domain_error("apply: finite images collide with different layers");
  }
  return out;
}

inline MarkedERS apply_chain(const std::vector<RadicalTransform>& chain, const MarkedERS& R) {
  MarkedERS cur = R;
  for (const auto& t : chain) cur = apply(t, cur);
  return cur;
}

// ---------------------------------------------------------------------------
// Duality
// ---------------------------------------------------------------------------

namespace detail {

inline long den_of(const Rational& x) {
  return static_cast<long>(x.get_den().get_si());
}

// The dual system rescaled by an integer lambda so that all radical points
// are integral: sys = lambda * { (2 / I(g,g)) * x : x in R }, up to the
// global constant min|g|^2 / 2 (the form is only defined up to scale).
struct ScaledDual {
  MarkedERS sys;
  long lambda = 1;
};

inline ScaledDual dual_scaled(const MarkedERS& R) {
  std::optional<Rational> min_norm;
  for (const auto& [g, S] : R.fibers) {
    if (S.is_empty()) continue;
    Rational n = geom::inner(g, g);
    if (!min_norm || n < *min_norm) min_norm = n;
  }
  if (!min_norm) throw std::invalid_argument("dual: empty system");
  long lambda = 1;
  for (const auto& [g, S] : R.fibers) {
    if (S.is_empty()) continue;
    lambda = std::lcm(lambda, den_of(*min_norm / geom::inner(g, g)));
  }
  ScaledDual out;
  out.lambda = lambda;
  out.sys.dim = R.dim;
  for (const auto& [g, S] : R.fibers) {
    if (S.is_empty()) continue;
    Rational f = *min_norm / geom::inner(g, g);
    out.sys.fibers[f * g] = ers::scale_set(S, to_long(rat(lambda) * f));
  }
  return out;
}

}  // namespace detail

// Dual system: every root g + m a + n b maps to (2 / I(g,g)) (g + m a + n b).
// The result is renormalized to a primitive integral realization: scaled so
// that all radical coordinates are integers, then divided by the content of
// each radical axis.  The realization is canonical up to isomorphism.
inline MarkedERS dual(const MarkedERS& R) {
  auto sd = detail::dual_scaled(R);
  long ga = 0, gb = 0;
  for (const auto& [g, S] : sd.sys.fibers) {
    const auto& L = S.lattice();
    ga = std::gcd(ga, std::gcd(L.p, L.q));
    gb = std::gcd(gb, L.r);
    for (const auto& o : S.offsets()) {
      ga = std::gcd(ga, o.m);
      gb = std::gcd(gb, o.n);
    }
  }
  if (ga == 0) ga = 1;
  if (gb == 0) gb = 1;
  if (ga == 1 && gb == 1) return sd.sys;
  cosets::AffineMap f;
  f.M = {rat(1, ga), rat(0), rat(0), rat(1, gb)};
  MarkedERS out;
  out.dim = sd.sys.dim;
  for (const auto& [g, S] : sd.sys.fibers) out.fibers[g] = cosets::affine_image(S, f);
  return out;
}

// ---------------------------------------------------------------------------
// Tier numbers
// ---------------------------------------------------------------------------

struct TierData {
  long t_total = 1;  // = t1 * t1_of_dual = t2 * t2_of_dual
  long t1 = 1, t2 = 1;
  long t1_dual = 1, t2_dual = 1;
};

namespace detail {

// (t, t1, t2) of one system: t is the norm ratio of the extreme layers; t1
// and t2 compare the radical generators of the dual lattice against those of
// the lattice itself, each normalized by the primitive generators delta_b and
// a of Q(R) cap rad.
inline std::tuple<long, long, long> tier_pair(const MarkedERS& R) {
  std::optional<Rational> mn, mx;
  for (const auto& [g, S] : R.fibers) {
    if (S.is_empty()) continue;
    Rational n = geom::inner(g, g);
    if (!mn || n < *mn) mn = n;
    if (!mx || n > *mx) mx = n;
  }
  if (!mn) throw std::invalid_argument("tier_numbers: empty system");
  Rational t = *mx / *mn;
  auto rad = R.radical_data();
  Rational rb_R = rad.delta_b.b;
  Rational p_R = rad.a_gen.a;
  auto sd = dual_scaled(R);
  auto rad_d = sd.sys.radical_data();
  Rational rb_D = rad_d.delta_b.b / sd.lambda;
  Rational p_D = rad_d.a_gen.a / sd.lambda;
  Rational t1 = rb_D / rb_R * t;
  Rational t2 = p_D / p_R * t;
  if (!is_integer(t) || !is_integer(t1) || !is_integer(t2) || t1 <= 0 || t2 <= 0)
    throw std::domain_error("tier_numbers: non-integral tier");
  return {to_long(t), to_long(t1), to_long(t2)};
}

}  // namespace detail

inline TierData tier_numbers(const MarkedERS& R) {
  TierData td;
  auto [t, t1, t2] = detail::tier_pair(R);
  auto [t_d, t1_d, t2_d] = detail::tier_pair(dual(R));
  if (t_d != t) throw std::logic_error("tier_numbers: dual changes the total tier");
  td.t_total = t;
  td.t1 = t1;
  td.t2 = t2;
  td.t1_dual = t1_d;
  td.t2_dual = t2_d;
  return td;
}

// ---------------------------------------------------------------------------
// Gluing
// ---------------------------------------------------------------------------

// Union of two systems sharing at least one finite layer, with a transform
// applied to the second factor first.  Shared layers must coincide exactly;
// choosing compatible realizations of the two factors is the caller's job.
inline MarkedERS glue(const MarkedERS& R_minus, const MarkedERS& R_plus,
                      const RadicalTransform& T = RadicalTransform::identity()) {
  MarkedERS X = apply(T, R_plus);
  if (R_minus.dim != X.dim)
    throw std::invalid_argument("glue: ambient dimensions differ");
  bool shared = false;
  MarkedERS out = R_minus;
  for (const auto& [g, S] : X.fibers) {
    if (S.is_empty()) continue;
    auto it = out.fibers.find(g);
    if (it != out.fibers.end() && !it->second.is_empty()) {
      shared = true;
      if (!(it->second == S)) throw std::domain_error("glue: shared layers disagree");
    } else {
      out.fibers[g] = S;
    }
  }
  if (!shared) throw std::invalid_argument("glue: the factors share no layer");
  return out;
}

// ---------------------------------------------------------------------------
// Folding
// ---------------------------------------------------------------------------

enum class FoldMode { Sum, Mean };

struct FoldingSpec {
  std::vector<std::size_t> sigma;  // permutation of the diagram nodes
  FoldMode mode = FoldMode::Sum;
};

// All non-identity permutations of the diagram nodes preserving fills, star
// flags, and the full inner-product matrix of the node roots.
inline std::vector<std::vector<std::size_t>> diagram_automorphisms(const analysis::Analysis& A) {
  const auto& V = A.node_roots;
  std::size_t n = V.size();
  std::vector<std::vector<std::size_t>> found;
  std::vector<std::size_t> perm(n, n);
  std::vector<char> used(n, 0);
  std::function<void(std::size_t)> go = [&](std::size_t i) {
    if (i == n) {
      bool ident = true;
      for (std::size_t k = 0; k < n; ++k) ident = ident && perm[k] == k;
      if (!ident) found.push_back(perm);
      return;
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (used[j]) continue;
      if (A.node_is_star[i] != A.node_is_star[j]) continue;
      if (A.graph.nodes[i].fill != A.graph.nodes[j].fill) continue;
      bool ok = geom::inner(V[i], V[i]) == geom::inner(V[j], V[j]);
      for (std::size_t k = 0; ok && k < i; ++k)
        ok = geom::inner(V[i], V[k]) == geom::inner(V[j], V[perm[k]]);
      if (!ok) continue;
      perm[i] = j;
      used[j] = 1;
      go(i + 1);
      used[j] = 0;
    }
  };
  go(0);
  return found;
}

namespace detail {

// Dense rational matrix acting on full coordinate tuples (eps..., b, a).
struct LinearMap {
  std::size_t dim = 0;                       // number of finite coordinates
  std::vector<std::vector<Rational>> rows;   // (dim+2) x (dim+2)

  std::vector<Rational> coords(const Vector& v) const {
    std::vector<Rational> c = v.eps;
    c.push_back(v.b);
    c.push_back(v.a);
    return c;
  }

  Vector operator()(const Vector& v) const {
    auto c = coords(v);
    Vector out;
    out.eps.assign(dim, rat(0));
    for (std::size_t r = 0; r < dim + 2; ++r) {
      Rational acc = 0;
      for (std::size_t k = 0; k < dim + 2; ++k) acc += rows[r][k] * c[k];
      if (r < dim)
        out.eps[r] = acc;
      else if (r == dim)
        out.b = acc;
      else
        out.a = acc;
    }
    return out;
  }
};

// Solve T v_i = w_i for a square rational matrix T; the v_i must span.
inline LinearMap solve_linear(std::size_t dim, const std::vector<Vector>& v,
                              const std::vector<Vector>& w) {
  std::size_t D = dim + 2, n = v.size();
  LinearMap T;
  T.dim = dim;
  // Row r of T solves  (coords v_i) . T_r = (coords w_i)[r]  for all i:
  // eliminate on the n x D matrix of input coordinates with D right-hand sides.
  std::vector<std::vector<Rational>> aug(n, std::vector<Rational>(2 * D, rat(0)));
  for (std::size_t i = 0; i < n; ++i) {
    auto ci = T.coords(v[i]);
    auto wi = T.coords(w[i]);
    for (std::size_t k = 0; k < D; ++k) {
      aug[i][k] = ci[k];
      aug[i][D + k] = wi[k];
    }
  }
  std::vector<std::size_t> pivot_col;
  std::size_t row = 0;
  for (std::size_t col = 0; col < D && row < n; ++col) {
    std::size_t pr = row;
    while (pr < n && aug[pr][col] == 0) ++pr;
    if (pr == n) continue;
    std::swap(aug[row], aug[pr]);
    Rational inv = 1 / aug[row][col];
    for (auto& x : aug[row]) x *= inv;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == row || aug[i][col] == 0) continue;
      Rational f = aug[i][col];
      for (std::size_t k = 0; k < 2 * D; ++k) aug[i][k] -= f * aug[row][k];
    }
    pivot_col.push_back(col);
    ++row;
  }
  if (pivot_col.size() < D)
    throw std::domain_error("fold: the node roots do not span the ambient space");
  for (std::size_t i = row; i < n; ++i)
    for (std::size_t k = D; k < 2 * D; ++k)
      if (aug[i][k] != 0) throw std::domain_error("fold: the node map is not linear");
  T.rows.assign(D, std::vector<Rational>(D, rat(0)));
  for (std::size_t i = 0; i < D; ++i)
    for (std::size_t r = 0; r < D; ++r) T.rows[r][pivot_col[i]] = aug[i][D + r];
  return T;
}

// Rebuild a marked system from a finite point cloud: recover an orthogonal
// simple basis from the shortest finite parts, express every point over it,
// and fit periodic coset sets to the radical coordinates.
inline MarkedERS resymbolize(const std::set<Vector>& images) {
  if (images.empty()) throw std::domain_error("fold: every image is isotropic");
  std::set<Vector> fins;
  for (const auto& x : images) fins.insert(x.finite_part());
  // Rank of the finite span.
  std::vector<std::vector<Rational>> rowsp;
  for (const auto& f : fins) {
    std::vector<Rational> r = f.eps;
    for (const auto& prev : rowsp) {
      std::size_t lead = 0;
      while (lead < prev.size() && prev[lead] == 0) ++lead;
      if (lead < prev.size() && r[lead] != 0) {
        Rational fac = r[lead] / prev[lead];
        for (std::size_t k = 0; k < r.size(); ++k) r[k] -= fac * prev[k];
      }
    }
    if (std::any_of(r.begin(), r.end(), [](const Rational& x) { return x != 0; }))
      rowsp.push_back(r);
  }
  std::size_t l_out = rowsp.size();
  // Orthogonal basis among the shortest finite parts.
  std::optional<Rational> nu;
  for (const auto& f : fins) {
    Rational n = geom::inner(f, f);
    if (n == 0) continue;
    if (!nu || n < *nu) nu = n;
  }
  std::vector<Vector> delta;
  for (const auto& f : fins) {
    if (geom::inner(f, f) != *nu) continue;
    bool ortho = std::all_of(delta.begin(), delta.end(),
                             [&](const Vector& d) { return geom::inner(f, d) == 0; });
    if (ortho) delta.push_back(f);
  }
  if (delta.size() != l_out)
    throw std::domain_error("fold: cannot recover an orthogonal short basis");
  // Coordinates over the new basis; collect radical points per finite key.
  std::map<Vector, std::vector<std::array<Rational, 2>>> pts;  // key -> (m, n)
  for (const auto& x : images) {
    Vector check;
    check.eps.assign(x.eps.size(), rat(0));
    Vector key;
    key.eps.assign(l_out, rat(0));
    for (std::size_t i = 0; i < l_out; ++i) {
      Rational c = geom::inner(x, delta[i]) / *nu;
      if (!is_integer(c)) throw std::domain_error("fold: non-integral image coordinate");
      check = check + c * delta[i];
      key.eps[i] = c;
    }
    if (!(check == x.finite_part()))
      throw std::domain_error("fold: image escapes the recovered base");
    pts[key].push_back({x.a, x.b});
  }
  // Scale the radical axes to integers, then divide out the content.
  long la = 1, lb = 1;
  for (const auto& [key, list] : pts)
    for (const auto& mn : list) {
      la = std::lcm(la, den_of(mn[0]));
      lb = std::lcm(lb, den_of(mn[1]));
    }
  long ga = 0, gb = 0;
  for (const auto& [key, list] : pts)
    for (const auto& mn : list) {
      ga = std::gcd(ga, to_long(rat(la) * mn[0]));
      gb = std::gcd(gb, to_long(rat(lb) * mn[1]));
    }
  if (ga == 0) ga = 1;
  if (gb == 0) gb = 1;
  MarkedERS out;
  out.dim = l_out;
  for (const auto& [key, list] : pts) {
    std::vector<Point> ps;
    for (const auto& mn : list)
      ps.push_back({to_long(rat(la) * mn[0]) / ga, to_long(rat(lb) * mn[1]) / gb});
    out.fibers[key] = CosetSet::make(Lattice2{8, 0, 8}, ps);
  }
  return out;
}

}  // namespace detail

// Fold a system along a diagram automorphism sigma: replace every root by the
// sum (or mean) over its orbit under the induced linear map, dropping
// isotropic images, and rebuild the result as a marked system of lower rank.
inline MarkedERS fold(const MarkedERS& R, const FoldingSpec& spec, long window = 9) {
  analysis::Analysis A = analysis::analyze(R);
  const auto& V = A.node_roots;
  std::size_t n = V.size();
  if (spec.sigma.size() != n)
    throw std::invalid_argument("fold: permutation size mismatch");
  std::vector<char> seen(n, 0);
  bool fixed = false, ident = true;
  for (std::size_t i = 0; i < n; ++i) {
    if (spec.sigma[i] >= n || seen[spec.sigma[i]])
      throw std::invalid_argument("fold: not a permutation");
    seen[spec.sigma[i]] = 1;
    fixed = fixed || spec.sigma[i] == i;
    ident = ident && spec.sigma[i] == i;
  }
  if (ident) throw std::invalid_argument("fold: identity permutation");
  if (!fixed) throw std::invalid_argument("fold: no fixed node");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (geom::inner(V[i], V[j]) != geom::inner(V[spec.sigma[i]], V[spec.sigma[j]]))
        throw std::invalid_argument("fold: permutation is not an isometry of the nodes");
  std::vector<Vector> img;
  for (std::size_t i = 0; i < n; ++i) img.push_back(V[spec.sigma[i]]);
  detail::LinearMap T = detail::solve_linear(R.dim, V, img);
  if (!(T(geom::basis_a(R.dim)) == geom::basis_a(R.dim)))
    throw std::domain_error("fold: the induced map moves the marking");
  std::set<Vector> images;
  for (const auto& v : R.enumerate_window(window)) {
    std::vector<Vector> orbit = {v};
    Vector cur = T(v);
    while (!(cur == v)) {
      orbit.push_back(cur);
      cur = T(cur);
      if (orbit.size() > 16) throw std::domain_error("fold: orbit does not close");
    }
    Vector sum = orbit[0];
    for (std::size_t i = 1; i < orbit.size(); ++i) sum = sum + orbit[i];
    if (spec.mode == FoldMode::Mean) sum = rat(1, static_cast<long>(orbit.size())) * sum;
    if (!geom::is_isotropic(sum)) images.insert(sum);
  }
  MarkedERS out = detail::resymbolize(images);
  auto rep = out.verify_axioms();
  if (!rep.ok()) throw std::domain_error("fold: the folded set is not a marked system");
  return out;
}

// ---------------------------------------------------------------------------
// Isomorphism testing
// ---------------------------------------------------------------------------

enum class IsoVerdict { Certificate, Separated, Inconclusive };

struct IsoStep {
  std::string name;
  RadicalTransform t;
};

struct IsoResult {
  IsoVerdict verdict = IsoVerdict::Inconclusive;
  std::vector<IsoStep> chain;  // for Certificate: maps the first system to the second
  std::string witness;         // for Separated: the distinguishing invariant
};

namespace detail {

// Quantities preserved by every isomorphism of (unmarked) systems: for each
// layer, its norm relative to the shortest, the index of its translation
// lattice relative to Q(R) cap rad, its coset count, and the density of the
// doubling set { x in the layer : 2x is a root }.
struct SystemInvariants {
  std::multiset<std::tuple<Rational, Rational, long, Rational>> per_fiber;

  bool operator==(const SystemInvariants& o) const { return per_fiber == o.per_fiber; }
};

inline SystemInvariants invariants(const MarkedERS& R) {
  std::optional<Rational> mn;
  for (const auto& [g, S] : R.fibers) {
    if (S.is_empty()) continue;
    Rational n = geom::inner(g, g);
    if (!mn || n < *mn) mn = n;
  }
  auto rad = R.radical_data();
  Rational rad_det = rad.a_gen.a * rad.delta_b.b;
  SystemInvariants inv;
  for (const auto& [g, S] : R.fibers) {
    if (S.is_empty()) continue;
    Rational norm_ratio = geom::inner(g, g) / *mn;
    Rational rel_index = rat(S.lattice().det()) / rad_det;
    long k = static_cast<long>(S.offsets().size());
    Rational dbl = 0;
    auto it = R.fibers.find(rat(2) * g);
    if (it != R.fibers.end() && !it->second.is_empty()) {
      const CosetSet& S2 = it->second;
      long P = 2 * std::lcm(std::lcm(S.lattice().p, S.lattice().r),
                            std::lcm(S2.lattice().p, S2.lattice().r));
      CosetSet D = cosets::detail::rebuild(Lattice2{P, 0, P}, [&](const Point& x) {
        return S.contains(x) && S2.contains({2 * x.m, 2 * x.n});
      });
      if (!D.is_empty()) {
        Rational dens_d = rat(static_cast<long>(D.offsets().size()), D.lattice().det());
        Rational dens_s = rat(k, S.lattice().det());
        dbl = dens_d / dens_s;
      }
    }
    inv.per_fiber.insert({norm_ratio, rel_index, k, dbl});
  }
  return inv;
}

inline std::vector<IsoStep> atom_list(bool marked) {
  std::vector<IsoStep> out;
  if (!marked) {
    out.push_back({"swap(a,b)", RadicalTransform::swap_ab()});
    for (long k : {1L, -1L, 2L, -2L})
      out.push_back({"chi(T^" + std::to_string(k) + ")", RadicalTransform::chi_T(k)});
  }
  for (long k : {1L, -1L, 2L, -2L})
    out.push_back({"chi(tT^" + std::to_string(k) + ")", RadicalTransform::chi_tT(rat(k))});
  const std::vector<Rational> cs = {rat(0),     rat(1, 2), rat(-1, 2), rat(1),
                                    rat(-1),    rat(3, 2), rat(-3, 2)};
  for (const auto& da : cs)
    for (const auto& db : cs) {
      if (da == 0 && db == 0) continue;
      out.push_back({"tau(" + to_string(da) + "a+" + to_string(db) + "b)",
                     RadicalTransform::tau(da, db)});
    }
  for (const auto& c : {rat(2), rat(1, 2)}) {
    out.push_back({"scale(b:" + to_string(c) + ")", RadicalTransform::scale(c, rat(1))});
    out.push_back({"scale(a:" + to_string(c) + ")", RadicalTransform::scale(rat(1), c)});
  }
  return out;
}

}  // namespace detail

// Decide whether two systems of the same base are isomorphic (as marked
// systems when `marked` is set).  Either returns an explicit chain of
// transforms carrying A onto B, or a separating invariant, or gives up after
// a bounded search.  "Separated" is always sound; "Inconclusive" is not a
// proof of non-isomorphism.
inline IsoResult isomorphic(const MarkedERS& A, const MarkedERS& B, bool marked,
                            int max_depth = 3) {
  IsoResult res;
  if (A.dim != B.dim) {
    res.verdict = IsoVerdict::Separated;
    res.witness = "ambient dimension";
    return res;
  }
  if (A.fibers == B.fibers) {
    res.verdict = IsoVerdict::Certificate;
    return res;
  }
  if (!(detail::invariants(A) == detail::invariants(B))) {
    res.verdict = IsoVerdict::Separated;
    res.witness = "layer invariants (relative norms, lattice indices, coset counts, doubling densities)";
    return res;
  }
  if (marked) {
    TierData ta = tier_numbers(A), tb = tier_numbers(B);
    if (ta.t1 != tb.t1 || ta.t2 != tb.t2) {
      res.verdict = IsoVerdict::Separated;
      res.witness = "tier numbers";
      return res;
    }
    diagram::Diagram da = analysis::analyze(A).graph;
    diagram::Diagram db = analysis::analyze(B).graph;
    if (!diagram::isomorphic(da, db)) {
      res.verdict = IsoVerdict::Separated;
      res.witness = "marked diagram";
      return res;
    }
  }
  auto atoms = detail::atom_list(marked);
  using State = std::map<Vector, CosetSet>;
  std::set<State> visited = {A.fibers};
  std::deque<std::pair<MarkedERS, std::vector<IsoStep>>> queue = {{A, {}}};
  while (!queue.empty()) {
    auto [cur, chain] = queue.front();
    queue.pop_front();
    if (static_cast<int>(chain.size()) >= max_depth) continue;
    for (const auto& atom : atoms) {
      MarkedERS nxt;
      try {
        nxt = apply(atom.t, cur);
      } catch (const std::exception&) {
        continue;  // the atom does not extend to this system
      }
      if (!visited.insert(nxt.fibers).second) continue;
      auto nchain = chain;
      nchain.push_back(atom);
      if (nxt.fibers == B.fibers) {
        res.verdict = IsoVerdict::Certificate;
        res.chain = nchain;
        return res;
      }
      queue.push_back({std::move(nxt), std::move(nchain)});
    }
  }
  return res;
}

}  // namespace elliptic::transforms
