#pragma once

#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "elliptic/diagram.hpp"
#include "elliptic/finite.hpp"

namespace elliptic::affine {

using finite::FiniteRootSystem;
using finite::FiniteType;
using finite::LengthClass;
using geom::Vector;

// One-dimensional coset off + mod * Z in the b-coefficient.
struct Coset1 {
  long mod = 1;
  long off = 0;

  Coset1() = default;
  Coset1(long mod_, long off_) : mod(mod_), off(((off_ % mod_) + mod_) % mod_) {
    if (mod_ <= 0) throw std::invalid_argument("Coset1: modulus must be positive");
  }
  bool contains(long n) const { return ((n - off) % mod) == 0; }
  auto operator<=>(const Coset1&) const = default;
};

enum class AffineType {
  A1, B1, C1, D1, E61, E71, E81, F41, G21,  // untwisted reduced
  B2, C2, F42, G23, BC2,                    // twisted reduced
  BCC, CvBC, BBv, CvC                       // non-reduced
};

inline std::string code_of(AffineType t) {
  switch (t) {
    case AffineType::A1: return "A1";
    case AffineType::B1: return "B1";
    case AffineType::C1: return "C1";
    case AffineType::D1: return "D1";
    case AffineType::E61: return "E61";
    case AffineType::E71: return "E71";
    case AffineType::E81: return "E81";
    case AffineType::F41: return "F41";
    case AffineType::G21: return "G21";
    case AffineType::B2: return "B2";
    case AffineType::C2: return "C2";
    case AffineType::F42: return "F42";
    case AffineType::G23: return "G23";
    case AffineType::BC2: return "BC2";
    case AffineType::BCC: return "BCC";
    case AffineType::CvBC: return "CvBC";
    case AffineType::BBv: return "BBv";
    case AffineType::CvC: return "CvC";
  }
  throw std::logic_error("unknown affine type");
}

inline AffineType affine_type_from_code(const std::string& s) {
  for (AffineType t : {AffineType::A1, AffineType::B1, AffineType::C1, AffineType::D1,
                       AffineType::E61, AffineType::E71, AffineType::E81, AffineType::F41,
                       AffineType::G21, AffineType::B2, AffineType::C2, AffineType::F42,
                       AffineType::G23, AffineType::BC2, AffineType::BCC, AffineType::CvBC,
                       AffineType::BBv, AffineType::CvC})
    if (code_of(t) == s) return t;
  throw std::invalid_argument("unknown affine type: " + s);
}

inline std::string affine_name(AffineType t, long l) {
  std::string r = std::to_string(l);
  switch (t) {
    case AffineType::A1: return "A_" + r + "^(1)";
    case AffineType::B1: return "B_" + r + "^(1)";
    case AffineType::C1: return "C_" + r + "^(1)";
    case AffineType::D1: return "D_" + r + "^(1)";
    case AffineType::E61: return "E_6^(1)";
    case AffineType::E71: return "E_7^(1)";
    case AffineType::E81: return "E_8^(1)";
    case AffineType::F41: return "F_4^(1)";
    case AffineType::G21: return "G_2^(1)";
    case AffineType::B2: return "B_" + r + "^(2)";
    case AffineType::C2: return "C_" + r + "^(2)";
    case AffineType::F42: return "F_4^(2)";
    case AffineType::G23: return "G_2^(3)";
    case AffineType::BC2: return "BC_" + r + "^(2)";
    case AffineType::BCC: return "BCC_" + r;
    case AffineType::CvBC: return "CvBC_" + r;
    case AffineType::BBv: return "BBv_" + r;
    case AffineType::CvC: return "CvC_" + r;
  }
  throw std::logic_error("unknown affine type");
}

struct AffineLayer {
  LengthClass cls;
  Coset1 coset;  // allowed b-coefficients for roots of this length class
};

struct AffineRootSystem {
  AffineType type;
  long rank = 0;  // l; the simple system has l+1 members alpha_0..alpha_l
  FiniteRootSystem base;
  std::vector<AffineLayer> layers;
  std::vector<Vector> simple_roots;  // alpha_0 first
  std::vector<long> marks;           // n_i with b = sum n_i alpha_i
  std::vector<std::string> worbit_notes;

  std::size_t dim() const { return base.dim(); }

  const Coset1& coset_of(LengthClass c) const {
    for (const auto& L : layers)
      if (L.cls == c) return L.coset;
    throw std::invalid_argument("coset_of: no layer of this class");
  }

  bool contains(const Vector& v) const {
    if (v.a != 0 || !is_integer(v.b)) return false;
    Vector fin = v.finite_part();
    if (!base.contains(fin)) return false;
    LengthClass c = base.length_class(fin);
    for (const auto& L : layers)
      if (L.cls == c) return L.coset.contains(to_long(v.b));
    return false;
  }

  std::string name() const { return affine_name(type, rank); }
};

namespace detail {

inline FiniteType base_type(AffineType t) {
  switch (t) {
    case AffineType::A1: return FiniteType::A;
    case AffineType::B1:
    case AffineType::B2: return FiniteType::B;
    case AffineType::C1:
    case AffineType::C2: return FiniteType::C;
    case AffineType::D1: return FiniteType::D;
    case AffineType::E61: return FiniteType::E6;
    case AffineType::E71: return FiniteType::E7;
    case AffineType::E81: return FiniteType::E8;
    case AffineType::F41:
    case AffineType::F42: return FiniteType::F4;
    case AffineType::G21:
    case AffineType::G23: return FiniteType::G2;
    case AffineType::BC2:
    case AffineType::BCC:
    case AffineType::CvBC:
    case AffineType::BBv:
    case AffineType::CvC: return FiniteType::BC;
  }
  throw std::logic_error("unknown affine type");
}

inline void check_rank(AffineType t, long l) {
  auto need = [&](long lo) {
    if (l < lo)
      throw std::invalid_argument(code_of(t) + " needs rank >= " + std::to_string(lo));
  };
  auto fix = [&](long v) {
    if (l != v) throw std::invalid_argument(code_of(t) + " has fixed rank " + std::to_string(v));
  };
  switch (t) {
    case AffineType::A1: need(1); break;
    case AffineType::B1: need(3); break;
    case AffineType::C1: need(2); break;
    case AffineType::D1: need(4); break;
    case AffineType::E61: fix(6); break;
    case AffineType::E71: fix(7); break;
    case AffineType::E81: fix(8); break;
    case AffineType::F41:
    case AffineType::F42: fix(4); break;
    case AffineType::G21:
    case AffineType::G23: fix(2); break;
    case AffineType::B2: need(2); break;
    case AffineType::C2: need(3); break;
    case AffineType::BC2: need(1); break;
    case AffineType::BCC: need(1); break;
    case AffineType::CvBC: need(1); break;
    case AffineType::BBv: need(2); break;
    case AffineType::CvC: need(1); break;
  }
}

}  // namespace detail

inline AffineRootSystem build_affine(AffineType t, long l) {
  detail::check_rank(t, l);
  AffineRootSystem A;
  A.type = t;
  A.rank = l;
  A.base = finite::build_finite(detail::base_type(t), l);
  std::size_t d = A.base.dim();
  Vector b = geom::basis_b(d);
  auto e = [&](long i) { return geom::unit_eps(d, i - 1); };  // 1-based

  // Layers: classes of the base paired with their allowed b-cosets.
  auto layer = [&](LengthClass c, long mod, long off) {
    A.layers.push_back({c, Coset1(mod, off)});
  };
  bool bc_has_middle = (detail::base_type(t) == FiniteType::BC && l > 1);
  switch (t) {
    case AffineType::A1:
    case AffineType::D1:
    case AffineType::E61:
    case AffineType::E71:
    case AffineType::E81:
      layer(LengthClass::Middle, 1, 0);
      break;
    case AffineType::B1:
    case AffineType::C1:
    case AffineType::F41:
    case AffineType::G21:
      layer(LengthClass::Short, 1, 0);
      layer(LengthClass::Long, 1, 0);
      break;
    case AffineType::B2:
    case AffineType::C2:
    case AffineType::F42:
      layer(LengthClass::Short, 1, 0);
      layer(LengthClass::Long, 2, 0);
      break;
    case AffineType::G23:
      layer(LengthClass::Short, 1, 0);
      layer(LengthClass::Long, 3, 0);
      break;
    case AffineType::BC2:
      layer(LengthClass::Short, 1, 0);
      if (bc_has_middle) layer(LengthClass::Middle, 1, 0);
      layer(LengthClass::Long, 2, 1);
      break;
    case AffineType::BCC:
      layer(LengthClass::Short, 1, 0);
      if (bc_has_middle) layer(LengthClass::Middle, 1, 0);
      layer(LengthClass::Long, 1, 0);
      break;
    case AffineType::CvBC:
      layer(LengthClass::Short, 1, 0);
      if (bc_has_middle) layer(LengthClass::Middle, 2, 0);
      layer(LengthClass::Long, 4, 0);
      break;
    case AffineType::BBv:
      layer(LengthClass::Short, 1, 0);
      if (bc_has_middle) layer(LengthClass::Middle, 1, 0);
      layer(LengthClass::Long, 2, 0);
      break;
    case AffineType::CvC:
      layer(LengthClass::Short, 1, 0);
      if (bc_has_middle) layer(LengthClass::Middle, 2, 0);
      layer(LengthClass::Long, 2, 0);
      break;
  }
  // BC_1 has no middle class.
  if (detail::base_type(t) == FiniteType::BC && l == 1) {
    // nothing extra: layers above already skip the middle class
  }

  // alpha_0 and marks, per type.
  Vector alpha0 = b;
  std::vector<long> marks;
  auto chain_marks = [&](std::initializer_list<long> head, long fill_count, long fill,
                         std::initializer_list<long> tail) {
    marks.assign(head);
    for (long i = 0; i < fill_count; ++i) marks.push_back(fill);
    marks.insert(marks.end(), tail);
  };
  switch (t) {
    case AffineType::A1:
      alpha0 = b - e(1) + e(l + 1);
      chain_marks({}, l + 1, 1, {});
      break;
    case AffineType::B1:
      alpha0 = b - e(1) - e(2);
      chain_marks({1, 1}, l - 1, 2, {});
      break;
    case AffineType::C1:
      alpha0 = b - rat(2) * e(1);
      chain_marks({1}, l - 1, 2, {1});
      break;
    case AffineType::D1:
      alpha0 = b - e(1) - e(2);
      chain_marks({1, 1}, l - 3, 2, {1, 1});
      break;
    case AffineType::E61: {
      Vector theta = rat(1, 2) * (e(1) + e(2) + e(3) + e(4) + e(5) - e(6) - e(7) + e(8));
      alpha0 = b - theta;
      marks = {1, 1, 2, 2, 3, 2, 1};
      break;
    }
    case AffineType::E71:
      alpha0 = b + e(7) - e(8);
      marks = {1, 2, 2, 3, 4, 3, 2, 1};
      break;
    case AffineType::E81:
      alpha0 = b - e(7) - e(8);
      marks = {1, 2, 3, 4, 6, 5, 4, 3, 2};
      break;
    case AffineType::F41:
      alpha0 = b - e(1) - e(2);
      marks = {1, 2, 3, 4, 2};
      break;
    case AffineType::G21:
      alpha0 = b + e(1) + e(2) - rat(2) * e(3);
      marks = {1, 3, 2};
      break;
    case AffineType::B2:
      alpha0 = b - e(1);
      chain_marks({}, l + 1, 1, {});
      break;
    case AffineType::C2:
      alpha0 = b - e(1) - e(2);
      chain_marks({1, 1}, l - 2, 2, {1});
      break;
    case AffineType::F42:
      alpha0 = b - e(1);
      marks = {1, 1, 2, 3, 2};
      break;
    case AffineType::G23:
      alpha0 = b + e(2) - e(3);
      marks = {1, 2, 1};
      break;
    case AffineType::BC2:
    case AffineType::BCC:
      alpha0 = b - rat(2) * e(1);
      chain_marks({1}, l, 2, {});
      break;
    case AffineType::CvBC:
    case AffineType::CvC:
      alpha0 = b - e(1);
      chain_marks({}, l + 1, 1, {});
      break;
    case AffineType::BBv:
      alpha0 = b - e(1) - e(2);
      if (l == 2) marks = {1, 1, 2};
      else chain_marks({1, 1}, l - 1, 2, {});
      break;
  }
  A.simple_roots.push_back(alpha0);
  for (const auto& s : A.base.simple_roots) A.simple_roots.push_back(Vector(s.eps, 0, 0));
  A.marks = marks;
  return A;
}

// Dynkin diagram of a finite system (black iff twice the root is a root).
inline diagram::Diagram dynkin_diagram(const FiniteRootSystem& S) {
  std::vector<std::string> labels;
  for (std::size_t i = 1; i <= S.simple_roots.size(); ++i)
    labels.push_back("a" + std::to_string(i));
  return diagram::build_diagram(S.simple_roots, labels, [&](const Vector& v) {
    return S.contains(rat(2) * v);
  });
}

inline diagram::Diagram dynkin_diagram(const AffineRootSystem& A) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < A.simple_roots.size(); ++i)
    labels.push_back("a" + std::to_string(i));
  return diagram::build_diagram(A.simple_roots, labels, [&](const Vector& v) {
    return A.contains(rat(2) * v);
  });
}

// --- Weyl orbits of an affine system ---------------------------------------
// States are (finite root, b-coefficient mod M); the simple reflections act
// exactly on these residues. M is doubled until the orbit count stabilizes.

struct AffineOrbit {
  std::vector<std::pair<Vector, long>> members;  // (finite part, residue mod modulus)
  long modulus = 1;
};

namespace detail {
inline long orbit_count(const AffineRootSystem& A, long M,
                        std::vector<AffineOrbit>* out = nullptr) {
  // Enumerate states present in the system.
  std::map<std::pair<Vector, long>, int> comp;
  std::vector<std::pair<Vector, long>> states;
  for (const auto& L : A.layers)
    for (const auto& g : A.base.roots_of_class(L.cls))
      for (long n = 0; n < M; ++n)
        if (((n - L.coset.off) % L.coset.mod + L.coset.mod) % L.coset.mod == 0) {
          comp[{g, n}] = -1;
          states.push_back({g, n});
        }
  long count = 0;
  for (const auto& start : states) {
    if (comp[start] != -1) continue;
    int id = static_cast<int>(count++);
    std::vector<std::pair<Vector, long>> stack = {start}, orbit;
    comp[start] = id;
    while (!stack.empty()) {
      auto [g, n] = stack.back();
      stack.pop_back();
      orbit.push_back({g, n});
      for (const auto& s : A.simple_roots) {
        Vector sf = s.finite_part();
        long k = to_long(s.b);
        Rational p = geom::pairing(sf, g);
        Vector g2 = geom::reflect(sf, g);
        long n2 = ((n - to_long(p) * k) % M + M) % M;
        auto key = std::make_pair(g2, n2);
        auto it = comp.find(key);
        if (it == comp.end()) throw std::logic_error("affine orbit left the system");
        if (it->second == -1) {
          it->second = id;
          stack.push_back(key);
        }
      }
    }
    if (out) out->push_back({std::move(orbit), M});
  }
  return count;
}
}  // namespace detail

inline std::vector<AffineOrbit> affine_weyl_orbits(const AffineRootSystem& A) {
  long M = 1;
  for (const auto& L : A.layers) M = std::lcm(M, L.coset.mod);
  long prev = detail::orbit_count(A, M);
  while (true) {
    long next = detail::orbit_count(A, 2 * M);
    if (next == prev) break;
    M *= 2;
    prev = next;
  }
  std::vector<AffineOrbit> orbits;
  detail::orbit_count(A, M, &orbits);
  return orbits;
}

// --- recognition ------------------------------------------------------------

// Identifies an affine system presented as layers (explicit finite roots plus
// a 1-D coset of allowed b-coefficients), up to overall rescaling of b.
// Returns (type, rank).
inline std::pair<AffineType, long> identify_affine(
    const std::vector<std::pair<std::vector<Vector>, Coset1>>& layers) {
  if (layers.empty()) throw std::invalid_argument("identify_affine: no layers");
  std::vector<Vector> all;
  for (const auto& [roots, coset] : layers) all.insert(all.end(), roots.begin(), roots.end());
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  std::size_t d = all.at(0).dim();

  // Match the finite part against the standard constructions.
  std::vector<std::pair<FiniteType, long>> candidates;
  long dl = static_cast<long>(d);
  candidates.push_back({FiniteType::A, dl - 1});
  if (dl >= 2) {
    candidates.push_back({FiniteType::B, dl});
    candidates.push_back({FiniteType::C, dl});
    candidates.push_back({FiniteType::D, dl});
  }
  candidates.push_back({FiniteType::BC, dl});
  if (dl == 8) {
    candidates.push_back({FiniteType::E6, 6});
    candidates.push_back({FiniteType::E7, 7});
    candidates.push_back({FiniteType::E8, 8});
  }
  if (dl == 4) candidates.push_back({FiniteType::F4, 4});
  if (dl == 3) candidates.push_back({FiniteType::G2, 2});
  FiniteRootSystem base;
  bool found = false;
  for (auto [ft, fl] : candidates) {
    if (fl < 1) continue;
    FiniteRootSystem trial;
    try {
      trial = finite::build_finite(ft, fl);
    } catch (const std::invalid_argument&) {
      continue;
    }
    if (trial.roots == all) {
      base = std::move(trial);
      found = true;
      break;
    }
  }
  if (!found) throw std::invalid_argument("identify_affine: finite part not recognized");

  // Class -> coset map; layers of the same class must agree.
  std::map<LengthClass, Coset1> cmap;
  for (const auto& [roots, coset] : layers) {
    for (const auto& r : roots) {
      LengthClass c = base.length_class(r);
      auto it = cmap.find(c);
      if (it == cmap.end()) cmap[c] = coset;
      else if (!(it->second == coset))
        throw std::invalid_argument("identify_affine: conflicting cosets in one class");
    }
  }
  // Normalize: divide all mods and offsets by their common gcd (rescaling b).
  long g = 0;
  for (const auto& [c, co] : cmap) g = std::gcd(g, std::gcd(co.mod, co.off));
  if (g == 0) throw std::invalid_argument("identify_affine: degenerate cosets");
  for (auto& [c, co] : cmap) co = Coset1(co.mod / g, co.off / g);

  for (AffineType t : {AffineType::A1, AffineType::B1, AffineType::C1, AffineType::D1,
                       AffineType::E61, AffineType::E71, AffineType::E81, AffineType::F41,
                       AffineType::G21, AffineType::B2, AffineType::C2, AffineType::F42,
                       AffineType::G23, AffineType::BC2, AffineType::BCC, AffineType::CvBC,
                       AffineType::BBv, AffineType::CvC}) {
    if (detail::base_type(t) != base.type) continue;
    AffineRootSystem trial;
    try {
      trial = build_affine(t, base.rank);
    } catch (const std::invalid_argument&) {
      continue;
    }
    std::map<LengthClass, Coset1> tmap;
    for (const auto& L : trial.layers) tmap[L.cls] = L.coset;
    if (tmap == cmap) return {t, base.rank};
  }
  throw std::invalid_argument("identify_affine: no matching affine type");
}

}  // namespace elliptic::affine
