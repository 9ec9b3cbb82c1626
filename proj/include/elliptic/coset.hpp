#pragma once

#include <nlohmann/json.hpp>

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "elliptic/rational.hpp"

namespace elliptic::cosets {

// Point of the radical lattice Z a (+) Z b, coordinates ordered
// (m = a-coefficient, n = b-coefficient).
struct Point {
  long m = 0;
  long n = 0;
  auto operator<=>(const Point&) const = default;
};

// Full-rank sublattice of Z^2 in column Hermite normal form:
//   basis columns (p, 0) and (q, r), with p > 0, r > 0, 0 <= q < p.
// First coordinate is m, second is n.
struct Lattice2 {
  long p = 1, q = 0, r = 1;

  long det() const { return p * r; }

  bool contains(const Point& x) const {
    if (x.n % r != 0) return false;
    long k = x.n / r;
    return (x.m - k * q) % p == 0;
  }

  // Reduce a point into the fundamental domain [0,p) x [0,r).
  Point reduce(const Point& x) const {
    long k = x.n / r - ((x.n % r) < 0 ? 1 : 0);
    long m = x.m - k * q;
    long n = x.n - k * r;
    m %= p;
    if (m < 0) m += p;
    return {m, n};
  }

  auto operator<=>(const Lattice2&) const = default;
};

namespace detail {
struct Egcd {
  long g, x, y;  // g = gcd(a,b) = x a + y b, g >= 0
};
inline Egcd egcd(long a, long b) {
  if (b == 0) return a >= 0 ? Egcd{a, 1, 0} : Egcd{-a, -1, 0};
  Egcd e = egcd(b, a % b);
  return {e.g, e.y, e.x - (a / b) * e.y};
}
}  // namespace detail

// Hermite normal form of an integer generating set; requires full rank.
inline Lattice2 hnf(const std::vector<Point>& gens) {
  // Vector rv whose n-component is the gcd r of all n-components, built by
  // pairwise extended-gcd combinations; the pure-n=0 remainders feed p.
  Point rv{0, 0};
  std::vector<long> m_only;
  for (const auto& g : gens) {
    if (g.n == 0) {
      m_only.push_back(g.m);
      continue;
    }
    if (rv.n == 0) {
      rv = g.n > 0 ? g : Point{-g.m, -g.n};
      continue;
    }
    auto e = detail::egcd(rv.n, g.n);
    Point comb{e.x * rv.m + e.y * g.m, e.g};
    // The lattice spanned by {rv, g} equals span{comb, w} where w has n = 0.
    long w_m = (g.n / e.g) * rv.m - (rv.n / e.g) * g.m;
    m_only.push_back(w_m);
    rv = comb;
  }
  long r = rv.n;
  long p = 0;
  for (long m : m_only) p = std::gcd(p, std::abs(m));
  if (p == 0 || r == 0)
    throw std::invalid_argument("hnf: generators do not span a full-rank lattice");
  long q = rv.m % p;
  if (q < 0) q += p;
  return Lattice2{p, q, r};
}

// Finite union of cosets of a full-rank sublattice of Z^2, canonical:
// offsets reduced and sorted, lattice coarsened to the stabilizer of the set.
class CosetSet {
 public:
  CosetSet() : lat_{1, 0, 1}, offsets_{} {}  // empty set over Z^2

  static CosetSet empty() { return CosetSet(); }

  static CosetSet make(const Lattice2& lat, std::vector<Point> offsets) {
    CosetSet s;
    s.lat_ = lat;
    for (auto& o : offsets) o = lat.reduce(o);
    std::sort(offsets.begin(), offsets.end());
    offsets.erase(std::unique(offsets.begin(), offsets.end()), offsets.end());
    s.offsets_ = std::move(offsets);
    s.coarsen();
    return s;
  }

  static CosetSet full() { return make(Lattice2{1, 0, 1}, {{0, 0}}); }

  const Lattice2& lattice() const { return lat_; }
  const std::vector<Point>& offsets() const { return offsets_; }
  bool is_empty() const { return offsets_.empty(); }

  bool contains(const Point& x) const {
    Point red = lat_.reduce(x);
    return std::binary_search(offsets_.begin(), offsets_.end(), red);
  }

  bool operator==(const CosetSet& o) const {
    return lat_ == o.lat_ && offsets_ == o.offsets_;
  }
  bool operator<(const CosetSet& o) const {
    if (!(lat_ == o.lat_)) return lat_ < o.lat_;
    return offsets_ < o.offsets_;
  }

 private:
  Lattice2 lat_;
  std::vector<Point> offsets_;  // sorted, reduced, distinct

  // Coarsen to the coarsest lattice leaving the set invariant: repeatedly try
  // prime-index superlattices (primes dividing det) until fixpoint.
  void coarsen() {
    if (offsets_.empty()) {
      lat_ = {1, 0, 1};
      return;
    }
    bool changed = true;
    while (changed) {
      changed = false;
      long d = lat_.det();
      for (long pr = 2; pr <= d; ++pr) {
        if (d % pr != 0) continue;  // try each prime factor (composites are
                                    // skipped implicitly: their prime divisors
                                    // come first and trigger a restart)
        for (const Lattice2& sup : prime_superlattices(lat_, pr)) {
          if (invariant_under(sup)) {
            rebase(sup);
            changed = true;
            break;
          }
        }
        if (changed) break;
      }
    }
  }

  // Integral superlattices L' with [L' : L] = prime pr.
  static std::vector<Lattice2> prime_superlattices(const Lattice2& L, long pr) {
    std::vector<Lattice2> out;
    const Point v1{L.p, 0}, v2{L.q, L.r};
    auto add = [&](long x1, long x2) {
      long mm = x1 * v1.m + x2 * v2.m;
      long nn = x1 * v1.n + x2 * v2.n;
      if (mm % pr != 0 || nn % pr != 0) return;
      Point w{mm / pr, nn / pr};
      out.push_back(hnf({v1, v2, w}));
    };
    add(1, 0);
    for (long x1 = 0; x1 < pr; ++x1) add(x1, 1);
    return out;
  }

  bool invariant_under(const Lattice2& sup) const {
    // Check translation invariance by each coset representative of sup / lat_.
    // It suffices to test the generators of sup (their translates of all
    // offsets must remain in the set).
    for (const Point& g : {Point{sup.p, 0}, Point{sup.q, sup.r}}) {
      for (const Point& o : offsets_) {
        if (!contains({o.m + g.m, o.n + g.n})) return false;
      }
    }
    return true;
  }

  void rebase(const Lattice2& sup) {
    std::set<Point> red;
    for (const Point& o : offsets_) red.insert(sup.reduce(o));
    lat_ = sup;
    offsets_.assign(red.begin(), red.end());
  }
};

// --- construction helpers -------------------------------------------------

// Cartesian product {i + k Z} x {j + k' Z} in (m, n).
inline CosetSet product_set(long m_off, long m_mod, long n_off, long n_mod) {
  if (m_mod <= 0 || n_mod <= 0) throw std::invalid_argument("product_set: bad modulus");
  return CosetSet::make(Lattice2{m_mod, 0, n_mod}, {{m_off, n_off}});
}

// L_{i,j} = { m a + n b : (m - i)(n - j) = 0 mod 2 }.
// L_{i,j}^{s1,s2} = { s2 m a + s1 n b : (m - i)(n - j) = 0 mod 2 }.
inline CosetSet L_set(long i, long j, long s1 = 1, long s2 = 1) {
  std::vector<Point> offs;
  for (long m = 0; m < 2; ++m)
    for (long n = 0; n < 2; ++n)
      if (((m - i) * (n - j)) % 2 == 0) offs.push_back({s2 * m, s1 * n});
  return CosetSet::make(Lattice2{2 * s2, 0, 2 * s1}, offs);
}

// Arbitrary union, canonicalized.
inline CosetSet union_all(const std::vector<CosetSet>& parts);

// --- set algebra ------------------------------------------------------------

namespace detail {
// Common invariance lattice of A and B: intersection of the two lattices.
inline Lattice2 intersect_lattices(const Lattice2& A, const Lattice2& B) {
  long d = std::lcm(A.det(), B.det());
  // d Z^2 is contained in both; collect residues in [0,d)^2 lying in both.
  std::vector<Point> gens = {{d, 0}, {0, d}};
  for (long m = 0; m < d; ++m)
    for (long n = 0; n < d; ++n)
      if (A.contains({m, n}) && B.contains({m, n})) gens.push_back({m, n});
  return hnf(gens);
}

template <typename Pred>
inline CosetSet rebuild(const Lattice2& L, Pred keep) {
  std::vector<Point> offs;
  for (long m = 0; m < L.p; ++m)
    for (long n = 0; n < L.r; ++n) {
      Point x = L.reduce({m, n});
      if (keep(x)) offs.push_back(x);
    }
  std::sort(offs.begin(), offs.end());
  offs.erase(std::unique(offs.begin(), offs.end()), offs.end());
  return CosetSet::make(L, offs);
}
}  // namespace detail

inline CosetSet set_union(const CosetSet& A, const CosetSet& B) {
  if (A.is_empty()) return B;
  if (B.is_empty()) return A;
  Lattice2 L = detail::intersect_lattices(A.lattice(), B.lattice());
  return detail::rebuild(L, [&](const Point& x) { return A.contains(x) || B.contains(x); });
}

inline CosetSet set_intersect(const CosetSet& A, const CosetSet& B) {
  if (A.is_empty() || B.is_empty()) return CosetSet::empty();
  Lattice2 L = detail::intersect_lattices(A.lattice(), B.lattice());
  return detail::rebuild(L, [&](const Point& x) { return A.contains(x) && B.contains(x); });
}

inline CosetSet set_difference(const CosetSet& A, const CosetSet& B) {
  if (A.is_empty()) return CosetSet::empty();
  if (B.is_empty()) return A;
  Lattice2 L = detail::intersect_lattices(A.lattice(), B.lattice());
  return detail::rebuild(L, [&](const Point& x) { return A.contains(x) && !B.contains(x); });
}

inline bool set_equals(const CosetSet& A, const CosetSet& B) { return A == B; }

inline bool set_subset(const CosetSet& A, const CosetSet& B) {
  return set_difference(A, B).is_empty();
}

inline CosetSet union_all(const std::vector<CosetSet>& parts) {
  CosetSet acc = CosetSet::empty();
  for (const auto& p : parts) acc = set_union(acc, p);
  return acc;
}

// --- affine images ----------------------------------------------------------

struct AffineMap {
  // x  |->  M x + t, with M rational 2x2 (row-major) and t a rational pair,
  // acting on (m, n) coordinates.
  std::array<Rational, 4> M{Rational(1), Rational(0), Rational(0), Rational(1)};
  std::array<Rational, 2> t{Rational(0), Rational(0)};

  std::array<Rational, 2> apply(const Point& x) const {
    return {M[0] * x.m + M[1] * x.n + t[0], M[2] * x.m + M[3] * x.n + t[1]};
  }
};

// Exact image of a coset set; throws if any image point is non-integral
// (the transform "does not extend" to this layer) or the image degenerates.
inline CosetSet affine_image(const CosetSet& S, const AffineMap& f) {
  if (S.is_empty()) return S;
  Rational det = f.M[0] * f.M[3] - f.M[1] * f.M[2];
  if (det == 0) throw std::invalid_argument("affine_image: singular matrix");
  auto to_point = [](const std::array<Rational, 2>& v) -> Point {
    if (!is_integer(v[0]) || !is_integer(v[1]))
      throw std::domain_error("affine_image: non-integral image");
    return {to_long(v[0]), to_long(v[1])};
  };
  const Lattice2& L = S.lattice();
  // Image lattice generators (linear part only).
  AffineMap lin = f;
  lin.t = {Rational(0), Rational(0)};
  Point g1 = to_point(lin.apply({L.p, 0}));
  Point g2 = to_point(lin.apply({L.q, L.r}));
  Lattice2 Li = hnf({g1, g2});
  std::vector<Point> offs;
  for (const Point& o : S.offsets()) offs.push_back(to_point(f.apply(o)));
  return CosetSet::make(Li, std::move(offs));
}

// --- queries ----------------------------------------------------------------

inline long min_positive_a_step(const CosetSet& S, const Point& p) {
  if (!S.contains(p)) throw std::invalid_argument("min_positive_a_step: point not in set");
  long bound = S.lattice().p;
  for (long k = 1; k <= bound; ++k)
    if (S.contains({p.m + k, p.n})) return k;
  throw std::logic_error("min_positive_a_step: no step within lattice period");
}

inline std::vector<Point> enumerate_box(const CosetSet& S, long N) {
  std::vector<Point> out;
  for (long m = -N; m <= N; ++m)
    for (long n = -N; n <= N; ++n)
      if (S.contains({m, n})) out.push_back({m, n});
  return out;  // already lexicographic by construction
}

// --- parsing and serialization ----------------------------------------------

// Text sugar: "Z*a+Z*b", "2Z*a+(1+2Z)*b", "(1+2Z)*a+4Z*b", "L(1,1)",
// "L(0,0;2,2)".  Whitespace ignored.  Order of the a-term and b-term is free.
inline CosetSet parse_coset_set(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!isspace(static_cast<unsigned char>(c))) s += c;
  if (s.rfind("L(", 0) == 0 && s.back() == ')') {
    std::string body = s.substr(2, s.size() - 3);
    long i, j, s1 = 1, s2 = 1;
    auto semi = body.find(';');
    std::string ij = semi == std::string::npos ? body : body.substr(0, semi);
    auto comma = ij.find(',');
    if (comma == std::string::npos) throw std::invalid_argument("parse_coset_set: " + text);
    i = std::stol(ij.substr(0, comma));
    j = std::stol(ij.substr(comma + 1));
    if (semi != std::string::npos) {
      std::string ss = body.substr(semi + 1);
      auto c2 = ss.find(',');
      if (c2 == std::string::npos) throw std::invalid_argument("parse_coset_set: " + text);
      s1 = std::stol(ss.substr(0, c2));
      s2 = std::stol(ss.substr(c2 + 1));
    }
    return L_set(i, j, s1, s2);
  }
  // Split into the a-term and b-term at the top-level '+'.
  int depth = 0;
  std::size_t split = std::string::npos;
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (s[k] == '(') ++depth;
    else if (s[k] == ')') --depth;
    else if (s[k] == '+' && depth == 0) {
      split = k;
      break;
    }
  }
  if (split == std::string::npos) throw std::invalid_argument("parse_coset_set: " + text);
  // Term forms: "Z*a", "kZ*a", "(i+kZ)*a" (same for b).
  auto parse_term = [&text](std::string term) -> std::tuple<char, long, long> {
    char var = term.back();
    if (var != 'a' && var != 'b') throw std::invalid_argument("parse_coset_set: " + text);
    if (term.size() < 3 || term[term.size() - 2] != '*')
      throw std::invalid_argument("parse_coset_set: " + text);
    std::string core = term.substr(0, term.size() - 2);
    long off = 0, mod = 1;
    if (core.front() == '(') {
      if (core.back() != ')') throw std::invalid_argument("parse_coset_set: " + text);
      core = core.substr(1, core.size() - 2);
      auto plus = core.find('+');
      if (plus == std::string::npos) throw std::invalid_argument("parse_coset_set: " + text);
      off = std::stol(core.substr(0, plus));
      core = core.substr(plus + 1);
    }
    if (core.back() != 'Z') throw std::invalid_argument("parse_coset_set: " + text);
    core.pop_back();
    mod = core.empty() ? 1 : std::stol(core);
    return {var, off, mod};
  };
  auto [v1, o1, k1] = parse_term(s.substr(0, split));
  auto [v2, o2, k2] = parse_term(s.substr(split + 1));
  if (v1 == v2) throw std::invalid_argument("parse_coset_set: duplicate variable: " + text);
  long mo = v1 == 'a' ? o1 : o2, mk = v1 == 'a' ? k1 : k2;
  long no = v1 == 'b' ? o1 : o2, nk = v1 == 'b' ? k1 : k2;
  return product_set(mo, mk, no, nk);
}

inline nlohmann::json to_json(const CosetSet& S) {
  nlohmann::json j;
  const Lattice2& L = S.lattice();
  j["lattice"] = {{L.p, L.q}, {0, L.r}};
  j["offsets"] = nlohmann::json::array();
  for (const auto& o : S.offsets()) j["offsets"].push_back({o.m, o.n});
  return j;
}

inline CosetSet coset_set_from_json(const nlohmann::json& j) {
  if (j.is_string()) return parse_coset_set(j.get<std::string>());
  Lattice2 L;
  L.p = j.at("lattice").at(0).at(0).get<long>();
  L.q = j.at("lattice").at(0).at(1).get<long>();
  L.r = j.at("lattice").at(1).at(1).get<long>();
  if (j.at("lattice").at(1).at(0).get<long>() != 0)
    throw std::invalid_argument("coset_set_from_json: lattice not upper triangular");
  std::vector<Point> offs;
  for (const auto& o : j.at("offsets")) offs.push_back({o.at(0).get<long>(), o.at(1).get<long>()});
  return CosetSet::make(L, std::move(offs));
}

}  // namespace elliptic::cosets
