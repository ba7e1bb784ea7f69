#ifndef POLYPART_POLYNOMIAL_HPP
#define POLYPART_POLYNOMIAL_HPP

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "polypart/errors.hpp"
#include "polypart/numeric.hpp"
#include "polypart/types.hpp"

namespace polypart {

// Exponent tuple; coordinates beyond nvars stay zero.
using Exponents = std::array<std::uint32_t, 3>;

inline std::uint32_t total_degree(const Exponents& e) { return e[0] + e[1] + e[2]; }

// Graded order: total degree first, then lexicographically larger tuple first
// within a degree. This is also the coordinate order of the Veronese map.
struct GrlexLess {
  bool operator()(const Exponents& a, const Exponents& b) const {
    auto da = total_degree(a), db = total_degree(b);
    if (da != db) return da < db;
    return a > b;  // (1,0,0) precedes (0,1,0)
  }
};

class UniPoly;

// Sparse multivariate polynomial over Q in 1..3 variables. Immutable value
// semantics; no stored coefficient is zero.
class Polynomial {
 public:
  explicit Polynomial(int nvars = 3) : nvars_(check_nvars(nvars)) {}

  static Polynomial constant(int nvars, const Rational& c);
  static Polynomial variable(int nvars, int var);  // x_var
  static Polynomial from_terms(int nvars,
                               const std::vector<std::pair<Exponents, Rational>>& terms);

  int nvars() const { return nvars_; }
  bool is_zero() const { return terms_.empty(); }
  // Total degree; -1 stands in for the zero polynomial.
  int degree() const;
  int degree_in(int var) const;
  std::size_t term_count() const { return terms_.size(); }
  const std::map<Exponents, Rational, GrlexLess>& terms() const { return terms_; }

  Rational eval(std::span<const Rational> point) const;
  int sign_at(std::span<const Rational> point) const { return sgn(eval(point)); }

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial scaled(const Rational& c) const;
  Polynomial partial(int var) const;

  // Exact division: throws logic_error if `divisor` does not divide exactly.
  Polynomial exact_div(const Polynomial& divisor) const;

  // Coefficient of x_var^k, as a polynomial with the same nvars.
  Polynomial coefficient_of(int var, std::uint32_t k) const;

  // Scale to coprime integer coefficients with positive leading (grlex)
  // coefficient. Canonical form shared by serialization and dedup.
  Polynomial primitive_part() const;

  bool operator==(const Polynomial& o) const {
    return nvars_ == o.nvars_ && terms_ == o.terms_;
  }

  std::string to_string() const;  // debug aid

 private:
  static int check_nvars(int nvars);
  void add_term(const Exponents& e, const Rational& c);

  int nvars_;
  std::map<Exponents, Rational, GrlexLess> terms_;
};

// Dense univariate polynomial over Q, low degree first.
class UniPoly {
 public:
  UniPoly() = default;
  explicit UniPoly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) {
    for (auto& c : c_) c.canonicalize();
    trim();
  }
  static UniPoly constant(const Rational& c) { return UniPoly({c}); }

  bool is_zero() const { return c_.empty(); }
  int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero
  const std::vector<Rational>& coeffs() const { return c_; }
  const Rational& coeff(std::size_t i) const { return c_[i]; }
  const Rational& leading() const { return c_.back(); }

  Rational eval(const Rational& t) const;
  int sign_at(const Rational& t) const { return sgn(eval(t)); }

  UniPoly operator+(const UniPoly& o) const;
  UniPoly operator-(const UniPoly& o) const;
  UniPoly operator*(const UniPoly& o) const;
  UniPoly scaled(const Rational& c) const;
  UniPoly derivative() const;

  // Quotient/remainder and exact division over Q.
  std::pair<UniPoly, UniPoly> divmod(const UniPoly& d) const;
  UniPoly exact_div(const UniPoly& d) const;

  UniPoly primitive_part() const;  // integer coprime coefficients, lc > 0

  bool operator==(const UniPoly& o) const { return c_ == o.c_; }

  std::string to_string() const;

 private:
  void trim();
  std::vector<Rational> c_;
};

// gcd over Q, returned primitive with positive leading coefficient.
UniPoly unipoly_gcd(UniPoly a, UniPoly b);

// Yun decomposition: returns (g_i, i) with u = lc * prod g_i^i, g_i squarefree
// and pairwise coprime, each primitive.
std::vector<std::pair<UniPoly, int>> squarefree_decomposition(const UniPoly& u);

// t -> p(origin + t * direction); identically zero iff the line lies in Z(p).
UniPoly restrict_parametric(const Polynomial& p, const Vec3& origin, const Vec3& direction);
UniPoly restrict_to_line(const Polynomial& p, const Line3& line);

// Restriction of a bivariate polynomial to the planar parametrized line
// (x, y) = (origin, direction) pair projected: p(x(t), y(t)).
UniPoly restrict_planar(const Polynomial& p, const Vec2& origin, const Vec2& direction);

// Sylvester resultant with respect to the given variable, computed by
// fraction-free (Bareiss) elimination over the coefficient ring.
Polynomial resultant(const Polynomial& p, const Polynomial& q, int var);
// Convenience: in 3 variables, eliminate z and return a 2-variable result.
Polynomial resultant_z(const Polynomial& p, const Polynomial& q);

// All monomials of total degree <= D at x, in GrlexLess order.
std::vector<Rational> veronese(std::span<const Rational> x, int D);
std::size_t veronese_dimension(int d, int D);  // binom(D+d, d)
std::vector<Exponents> monomials_up_to(int d, int D);

}  // namespace polypart

#endif
