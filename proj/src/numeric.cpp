#include "polypart/numeric.hpp"

#include "polypart/errors.hpp"

namespace polypart {

std::string rational_to_string(const Rational& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rational rational_from_string(const std::string& s) {
  if (s.empty()) throw ParseError("empty rational");
  for (char ch : s) {
    if (!(ch == '-' || ch == '/' || (ch >= '0' && ch <= '9')))
      throw ParseError("bad rational literal: " + s);
  }
  try {
    Rational q(s);
    q.canonicalize();
    if (q.get_den() == 0) throw ParseError("zero denominator: " + s);
    return q;
  } catch (const std::invalid_argument&) {
    throw ParseError("bad rational literal: " + s);
  }
}

Integer floor_int(const Rational& q) {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
  return r;
}

Integer ceil_int(const Rational& q) {
  Integer r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
  return r;
}

namespace {

// 0 <= lo < hi assumed; open interval.
Rational simplest_nonneg(const Rational& lo, const Rational& hi) {
  Integer n = floor_int(lo) + 1;  // smallest integer strictly above lo
  if (Rational(n) < hi) return Rational(n);
  Integer k = floor_int(lo);
  // Both ends inside [k, k+1]; recurse on the reciprocal of the fractional part.
  Rational flo = lo - Rational(k);  // >= 0
  Rational fhi = hi - Rational(k);  // <= 1, > flo
  if (flo == 0) {
    // Interval (k, hi): pick k + 1/m with the smallest feasible m.
    Integer m = floor_int(1 / fhi) + 1;
    return Rational(k) + Rational(1) / Rational(m);
  }
  Rational inner = simplest_nonneg(1 / fhi, 1 / flo);
  return Rational(k) + 1 / inner;
}

}  // namespace

Rational simplest_rational_between(const Rational& lo, const Rational& hi) {
  POLYPART_CHECK(lo < hi, "simplest_rational_between needs lo < hi");
  if (lo < 0 && 0 < hi) return Rational(0);
  if (hi <= 0) return -simplest_nonneg(-hi, -lo);
  if (lo >= 0) return simplest_nonneg(lo, hi);
  return Rational(0);  // lo < 0 <= hi handled: hi == 0 impossible here
}

}  // namespace polypart
