#ifndef POLYPART_ALGEBRAIC_HPP
#define POLYPART_ALGEBRAIC_HPP

#include <optional>
#include <string>
#include <vector>

#include "polypart/polynomial.hpp"

namespace polypart {

// A real algebraic number: either an exact rational, or the unique root of a
// squarefree primitive integer polynomial inside an open isolating interval
// (lo, hi) with poly(lo) != 0 != poly(hi).
class AlgebraicReal {
 public:
  AlgebraicReal() : exact_(Rational(0)) {}
  explicit AlgebraicReal(Rational q) : exact_(std::move(q)) {}
  AlgebraicReal(UniPoly squarefree, Rational lo, Rational hi);

  bool is_exact() const { return exact_.has_value(); }
  const Rational& exact_value() const { return *exact_; }
  const Rational& lower() const { return is_exact() ? *exact_ : lo_; }
  const Rational& upper() const { return is_exact() ? *exact_ : hi_; }
  const UniPoly& defining_poly() const { return poly_; }

  // Halve the interval (no-op when exact).
  void refine();
  void refine_below(const Rational& width);

  // Attempt to certify the root as rational via Stern-Brocot descent.
  bool try_exact(int max_steps = 64);

  int compare(const AlgebraicReal& o) const;
  int compare(const Rational& q) const;
  bool operator<(const AlgebraicReal& o) const { return compare(o) < 0; }
  bool operator==(const AlgebraicReal& o) const { return compare(o) == 0; }
  bool equals_rational(const Rational& q) const { return compare(q) == 0; }

  double to_double() const;
  std::string to_string() const;

 private:
  int sign_in_interval(const Rational& q) const;  // sign of poly at q, q in [lo,hi]
  std::optional<Rational> exact_;
  UniPoly poly_;      // squarefree, primitive; empty when exact
  Rational lo_, hi_;  // open isolating interval; poly(lo), poly(hi) nonzero
};

struct RootWithMultiplicity {
  AlgebraicReal root;
  int multiplicity = 1;
};

// All distinct real roots in increasing order, with multiplicities.
// Throws ZeroPolynomial on the zero input.
std::vector<RootWithMultiplicity> real_roots(const UniPoly& u);

// Distinct real roots of the squarefree part, increasing. Convenience for the
// common case where multiplicity is irrelevant.
std::vector<AlgebraicReal> distinct_real_roots(const UniPoly& u);

// Number of sign variations in a coefficient sequence (zeros skipped).
int sign_variations(const std::vector<Rational>& coeffs);

// Descartes bound on the number of roots of `u` in the open interval (a, b):
// 0 and 1 are exact answers, >= 2 means "unknown, possibly that many".
int descartes_interval_bound(const UniPoly& u, const Rational& a, const Rational& b);

// Rational B with all real roots of u inside (-B, B) (Cauchy bound).
Rational root_bound(const UniPoly& u);

// Sorted merge of cut parameters with exact deduplication.
std::vector<AlgebraicReal> sort_unique(std::vector<AlgebraicReal> values);

// A rational strictly between a and b (a < b required).
Rational rational_between(const AlgebraicReal& a, const AlgebraicReal& b);

}  // namespace polypart

#endif
