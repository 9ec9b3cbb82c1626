#pragma once

#include <nlohmann/json.hpp>

#include <algorithm>
#include <compare>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "elliptic/rational.hpp"

namespace elliptic::geom {

// Element of the ambient space F = <eps_1..eps_d> (+) <b> (+) <a> with the
// semidefinite form I(eps_i,eps_j) = delta_ij, I(F,b) = I(F,a) = 0.
// The eps dimension d may exceed the root-system rank (A_l uses l+1
// coordinates, the E series uses 8).
struct Vector {
  std::vector<Rational> eps;
  Rational b{0};
  Rational a{0};

  Vector() = default;
  Vector(std::vector<Rational> e, Rational b_, Rational a_)
      : eps(std::move(e)), b(std::move(b_)), a(std::move(a_)) {}

  std::size_t dim() const { return eps.size(); }

  bool operator==(const Vector& o) const { return eps == o.eps && b == o.b && a == o.a; }

  // Deterministic total order (used for canonical sorting; GMP rationals
  // compare by value).
  bool operator<(const Vector& o) const {
    if (eps.size() != o.eps.size()) return eps.size() < o.eps.size();
    for (std::size_t i = 0; i < eps.size(); ++i)
      if (eps[i] != o.eps[i]) return eps[i] < o.eps[i];
    if (b != o.b) return b < o.b;
    return a < o.a;
  }

  Vector operator+(const Vector& o) const {
    check_dim(o);
    Vector r = *this;
    for (std::size_t i = 0; i < eps.size(); ++i) r.eps[i] += o.eps[i];
    r.b += o.b;
    r.a += o.a;
    return r;
  }
  Vector operator-(const Vector& o) const {
    check_dim(o);
    Vector r = *this;
    for (std::size_t i = 0; i < eps.size(); ++i) r.eps[i] -= o.eps[i];
    r.b -= o.b;
    r.a -= o.a;
    return r;
  }
  Vector operator-() const {
    Vector r = *this;
    for (auto& c : r.eps) c = -c;
    r.b = -r.b;
    r.a = -r.a;
    return r;
  }
  friend Vector operator*(const Rational& s, const Vector& v) {
    Vector r = v;
    for (auto& c : r.eps) c *= s;
    r.b *= s;
    r.a *= s;
    return r;
  }

  bool is_zero() const {
    if (b != 0 || a != 0) return false;
    return std::all_of(eps.begin(), eps.end(), [](const Rational& c) { return c == 0; });
  }

  // The finite (eps-only) part; radical coefficients dropped.
  Vector finite_part() const { return Vector(eps, 0, 0); }

  void check_dim(const Vector& o) const {
    if (eps.size() != o.eps.size())
      throw std::invalid_argument("Vector: eps dimension mismatch");
  }
};

inline Vector unit_eps(std::size_t dim, std::size_t i, const Rational& c = 1) {
  Vector v(std::vector<Rational>(dim, Rational(0)), 0, 0);
  v.eps.at(i) = c;
  return v;
}
inline Vector basis_b(std::size_t dim) {
  return Vector(std::vector<Rational>(dim, Rational(0)), 1, 0);
}
inline Vector basis_a(std::size_t dim) {
  return Vector(std::vector<Rational>(dim, Rational(0)), 0, 1);
}

inline Rational inner(const Vector& u, const Vector& v) {
  u.check_dim(v);
  Rational s = 0;
  for (std::size_t i = 0; i < u.eps.size(); ++i) s += u.eps[i] * v.eps[i];
  return s;
}

inline bool is_isotropic(const Vector& v) { return inner(v, v) == 0; }

inline Vector dual_root(const Vector& alpha) {
  Rational n = inner(alpha, alpha);
  if (n == 0) throw std::domain_error("dual_root: isotropic vector");
  return (Rational(2) / n) * alpha;
}

// Pairing <alpha_dual, lambda> = 2 I(alpha,lambda) / I(alpha,alpha).
inline Rational pairing(const Vector& alpha, const Vector& lambda) {
  Rational n = inner(alpha, alpha);
  if (n == 0) throw std::domain_error("pairing: isotropic vector");
  return Rational(2) * inner(alpha, lambda) / n;
}

inline Vector reflect(const Vector& alpha, const Vector& lambda) {
  return lambda - pairing(alpha, lambda) * alpha;
}

inline std::string to_string(const Vector& v) {
  std::ostringstream os;
  bool first = true;
  auto term = [&](const Rational& c, const std::string& name) {
    if (c == 0) return;
    if (!first) os << (c > 0 ? " + " : " - ");
    else if (c < 0) os << "-";
    Rational ac = abs(c);
    if (ac != 1) os << ac.get_str() << "*";
    os << name;
    first = false;
  };
  for (std::size_t i = 0; i < v.eps.size(); ++i) term(v.eps[i], "e" + std::to_string(i + 1));
  term(v.b, "b");
  term(v.a, "a");
  if (first) os << "0";
  return os.str();
}

inline nlohmann::json to_json(const Vector& v) {
  nlohmann::json j;
  j["eps"] = nlohmann::json::array();
  for (const auto& c : v.eps) j["eps"].push_back(elliptic::to_string(c));
  j["b"] = elliptic::to_string(v.b);
  j["a"] = elliptic::to_string(v.a);
  return j;
}

inline Vector vector_from_json(const nlohmann::json& j) {
  Vector v;
  for (const auto& c : j.at("eps")) v.eps.push_back(parse_rational(c.get<std::string>()));
  v.b = parse_rational(j.at("b").get<std::string>());
  v.a = parse_rational(j.at("a").get<std::string>());
  return v;
}

}  // namespace elliptic::geom
