#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace elliptic {

// Exact rational number. Thin layer over GMP's mpq_class: always canonical
// (reduced, positive denominator), parses/prints the "p/q" text form used in
// all JSON interfaces.
using Rational = mpq_class;

inline Rational rat(long num, long den = 1) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline bool is_integer(const Rational& r) { return r.get_den() == 1; }

inline long to_long(const Rational& r) {
  if (!is_integer(r)) throw std::domain_error("to_long: not an integer: " + r.get_str());
  if (!r.get_num().fits_slong_p()) throw std::overflow_error("to_long: out of range");
  return r.get_num().get_si();
}

inline Rational parse_rational(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("parse_rational: empty string");
  Rational r;
  if (r.set_str(s, 10) != 0) throw std::invalid_argument("parse_rational: bad input: " + s);
  r.canonicalize();
  if (r.get_den() == 0) throw std::invalid_argument("parse_rational: zero denominator: " + s);
  return r;
}

inline std::string to_string(const Rational& r) { return r.get_str(); }

inline long ifloor(const Rational& r) {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num().get_mpz_t(), r.get_den().get_mpz_t());
  if (!q.fits_slong_p()) throw std::overflow_error("ifloor: out of range");
  return q.get_si();
}

}  // namespace elliptic
