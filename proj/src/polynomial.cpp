#include "polypart/polynomial.hpp"

#include <algorithm>
#include <sstream>

namespace polypart {

int Polynomial::check_nvars(int nvars) {
  if (nvars < 1 || nvars > 3) throw DimensionMismatch("nvars must be 1, 2, or 3");
  return nvars;
}

void Polynomial::add_term(const Exponents& e, const Rational& c) {
  if (c == 0) return;
  auto it = terms_.find(e);
  if (it == terms_.end()) {
    terms_.emplace(e, c);
  } else {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Polynomial Polynomial::constant(int nvars, const Rational& c) {
  Polynomial p(nvars);
  p.add_term({0, 0, 0}, c);
  return p;
}

Polynomial Polynomial::variable(int nvars, int var) {
  if (var < 0 || var >= nvars) throw DimensionMismatch("variable index out of range");
  Polynomial p(nvars);
  Exponents e{0, 0, 0};
  e[var] = 1;
  p.add_term(e, Rational(1));
  return p;
}

Polynomial Polynomial::from_terms(int nvars,
                                  const std::vector<std::pair<Exponents, Rational>>& terms) {
  Polynomial p(nvars);
  for (const auto& [e, c] : terms) {
    for (int v = nvars; v < 3; ++v) {
      if (e[v] != 0) throw DimensionMismatch("exponent uses variable beyond nvars");
    }
    Rational cc = c;
    cc.canonicalize();
    p.add_term(e, cc);
  }
  return p;
}

int Polynomial::degree() const {
  int d = -1;
  for (const auto& [e, c] : terms_) d = std::max(d, static_cast<int>(total_degree(e)));
  return d;
}

int Polynomial::degree_in(int var) const {
  int d = terms_.empty() ? -1 : 0;
  for (const auto& [e, c] : terms_) d = std::max(d, static_cast<int>(e[var]));
  return d;
}

Rational Polynomial::eval(std::span<const Rational> point) const {
  if (static_cast<int>(point.size()) != nvars_)
    throw DimensionMismatch("point dimension does not match nvars");
  // Power cache per variable up to the max exponent used.
  std::array<std::vector<Rational>, 3> pows;
  for (int v = 0; v < nvars_; ++v) pows[v].push_back(Rational(1));
  Rational acc(0);
  for (const auto& [e, c] : terms_) {
    Rational term = c;
    for (int v = 0; v < nvars_; ++v) {
      auto& pv = pows[v];
      while (pv.size() <= e[v]) pv.push_back(pv.back() * point[v]);
      term *= pv[e[v]];
    }
    acc += term;
  }
  return acc;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  if (nvars_ != o.nvars_) throw DimensionMismatch("nvars mismatch in +");
  Polynomial r(*this);
  for (const auto& [e, c] : o.terms_) r.add_term(e, c);
  return r;
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
  if (nvars_ != o.nvars_) throw DimensionMismatch("nvars mismatch in -");
  Polynomial r(*this);
  for (const auto& [e, c] : o.terms_) r.add_term(e, -c);
  return r;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
  if (nvars_ != o.nvars_) throw DimensionMismatch("nvars mismatch in *");
  Polynomial r(nvars_);
  for (const auto& [ea, ca] : terms_) {
    for (const auto& [eb, cb] : o.terms_) {
      Exponents e{ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]};
      r.add_term(e, ca * cb);
    }
  }
  return r;
}

Polynomial Polynomial::scaled(const Rational& c) const {
  Polynomial r(nvars_);
  if (c == 0) return r;
  for (const auto& [e, coef] : terms_) r.terms_.emplace(e, coef * c);
  return r;
}

Polynomial Polynomial::partial(int var) const {
  if (var < 0 || var >= nvars_) throw DimensionMismatch("partial: variable out of range");
  Polynomial r(nvars_);
  for (const auto& [e, c] : terms_) {
    if (e[var] == 0) continue;
    Exponents d = e;
    d[var] -= 1;
    r.add_term(d, c * Rational(static_cast<long>(e[var])));
  }
  return r;
}

Polynomial Polynomial::exact_div(const Polynomial& divisor) const {
  if (nvars_ != divisor.nvars_) throw DimensionMismatch("nvars mismatch in exact_div");
  POLYPART_CHECK(!divisor.is_zero(), "division by zero polynomial");
  Polynomial rem(*this);
  Polynomial quot(nvars_);
  const auto& dlead = *divisor.terms_.rbegin();  // grlex-largest term
  while (!rem.terms_.empty()) {
    const auto& rlead = *rem.terms_.rbegin();
    Exponents q;
    for (int v = 0; v < 3; ++v) {
      POLYPART_CHECK(rlead.first[v] >= dlead.first[v], "inexact polynomial division");
      q[v] = rlead.first[v] - dlead.first[v];
    }
    Rational qc = rlead.second / dlead.second;
    quot.add_term(q, qc);
    Polynomial mono(nvars_);
    mono.add_term(q, qc);
    rem = rem - mono * divisor;
  }
  return quot;
}

Polynomial Polynomial::coefficient_of(int var, std::uint32_t k) const {
  Polynomial r(nvars_);
  for (const auto& [e, c] : terms_) {
    if (e[var] != k) continue;
    Exponents d = e;
    d[var] = 0;
    r.add_term(d, c);
  }
  return r;
}

Polynomial Polynomial::primitive_part() const {
  if (terms_.empty()) return *this;
  Integer num_gcd(0), den_lcm(1);
  for (const auto& [e, c] : terms_) {
    mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), c.get_num().get_mpz_t());
    mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den().get_mpz_t());
  }
  Rational scale(den_lcm, num_gcd);
  scale.canonicalize();
  if (terms_.rbegin()->second < 0) scale = -scale;
  return scaled(scale);
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  static const char* names[3] = {"x", "y", "z"};
  std::ostringstream os;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [e, c] = *it;
    if (!first) os << " + ";
    first = false;
    os << c.get_str();
    for (int v = 0; v < nvars_; ++v) {
      if (e[v] == 0) continue;
      os << "*" << names[v];
      if (e[v] > 1) os << "^" << e[v];
    }
  }
  return os.str();
}

// ---------------------------------------------------------------------------

void UniPoly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Rational UniPoly::eval(const Rational& t) const {
  Rational acc(0);
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * t + *it;
  return acc;
}

UniPoly UniPoly::operator+(const UniPoly& o) const {
  std::vector<Rational> r(std::max(c_.size(), o.c_.size()), Rational(0));
  for (std::size_t i = 0; i < c_.size(); ++i) r[i] += c_[i];
  for (std::size_t i = 0; i < o.c_.size(); ++i) r[i] += o.c_[i];
  return UniPoly(std::move(r));
}

UniPoly UniPoly::operator-(const UniPoly& o) const {
  std::vector<Rational> r(std::max(c_.size(), o.c_.size()), Rational(0));
  for (std::size_t i = 0; i < c_.size(); ++i) r[i] += c_[i];
  for (std::size_t i = 0; i < o.c_.size(); ++i) r[i] -= o.c_[i];
  return UniPoly(std::move(r));
}

UniPoly UniPoly::operator*(const UniPoly& o) const {
  if (c_.empty() || o.c_.empty()) return UniPoly();
  std::vector<Rational> r(c_.size() + o.c_.size() - 1, Rational(0));
  for (std::size_t i = 0; i < c_.size(); ++i)
    for (std::size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
  return UniPoly(std::move(r));
}

UniPoly UniPoly::scaled(const Rational& s) const {
  if (s == 0) return UniPoly();
  std::vector<Rational> r(c_);
  for (auto& v : r) v *= s;
  return UniPoly(std::move(r));
}

UniPoly UniPoly::derivative() const {
  if (c_.size() <= 1) return UniPoly();
  std::vector<Rational> r(c_.size() - 1);
  for (std::size_t i = 1; i < c_.size(); ++i)
    r[i - 1] = c_[i] * Rational(static_cast<long>(i));
  return UniPoly(std::move(r));
}

std::pair<UniPoly, UniPoly> UniPoly::divmod(const UniPoly& d) const {
  POLYPART_CHECK(!d.is_zero(), "unipoly division by zero");
  std::vector<Rational> rem(c_);
  int dd = d.degree();
  std::vector<Rational> quot;
  while (static_cast<int>(rem.size()) - 1 >= dd) {
    while (!rem.empty() && rem.back() == 0) rem.pop_back();
    int rd = static_cast<int>(rem.size()) - 1;
    if (rd < dd) break;
    Rational q = rem.back() / d.leading();
    std::size_t shift = rd - dd;
    if (quot.size() < shift + 1) quot.resize(shift + 1, Rational(0));
    quot[shift] += q;
    for (int i = 0; i <= dd; ++i) rem[shift + i] -= q * d.coeff(i);
  }
  return {UniPoly(std::move(quot)), UniPoly(std::move(rem))};
}

UniPoly UniPoly::exact_div(const UniPoly& d) const {
  auto [q, r] = divmod(d);
  POLYPART_CHECK(r.is_zero(), "inexact unipoly division");
  return q;
}

UniPoly UniPoly::primitive_part() const {
  if (c_.empty()) return *this;
  Integer num_gcd(0), den_lcm(1);
  for (const auto& c : c_) {
    mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), c.get_num().get_mpz_t());
    mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den().get_mpz_t());
  }
  Rational scale(den_lcm, num_gcd);
  scale.canonicalize();
  if (c_.back() < 0) scale = -scale;
  return scaled(scale);
}

std::string UniPoly::to_string() const {
  if (c_.empty()) return "0";
  std::ostringstream os;
  for (int i = degree(); i >= 0; --i) {
    if (c_[i] == 0) continue;
    if (i != degree()) os << " + ";
    os << c_[i].get_str();
    if (i > 0) os << "*t^" << i;
  }
  return os.str();
}

UniPoly unipoly_gcd(UniPoly a, UniPoly b) {
  if (a.is_zero()) return b.is_zero() ? b : b.primitive_part();
  if (b.is_zero()) return a.primitive_part();
  a = a.primitive_part();
  b = b.primitive_part();
  while (!b.is_zero()) {
    auto [q, r] = a.divmod(b);
    a = std::move(b);
    b = r.is_zero() ? UniPoly() : r.primitive_part();
  }
  return a.primitive_part();
}

std::vector<std::pair<UniPoly, int>> squarefree_decomposition(const UniPoly& u) {
  POLYPART_CHECK(!u.is_zero(), "squarefree decomposition of zero");
  std::vector<std::pair<UniPoly, int>> out;
  UniPoly f = u.primitive_part();
  if (f.degree() == 0) return out;
  // Yun's algorithm.
  UniPoly fp = f.derivative();
  UniPoly a = unipoly_gcd(f, fp);
  UniPoly b = f.exact_div(a);
  UniPoly c = fp.exact_div(a);
  UniPoly d = c - b.derivative();
  int i = 1;
  while (b.degree() > 0) {
    UniPoly g = unipoly_gcd(b, d);
    if (g.degree() > 0) out.emplace_back(g, i);
    b = b.exact_div(g);
    c = d.exact_div(g);
    d = c - b.derivative();
    ++i;
  }
  return out;
}

UniPoly restrict_parametric(const Polynomial& p, const Vec3& origin, const Vec3& direction) {
  if (direction[0] == 0 && direction[1] == 0 && direction[2] == 0)
    throw ZeroDirection("restrict_parametric needs a nonzero direction");
  std::array<std::vector<UniPoly>, 3> pows;
  for (int v = 0; v < 3; ++v)
    pows[v].push_back(UniPoly::constant(Rational(1)));
  std::array<UniPoly, 3> lin;
  for (int v = 0; v < 3; ++v) lin[v] = UniPoly({origin[v], direction[v]});
  UniPoly acc;
  for (const auto& [e, c] : p.terms()) {
    UniPoly term = UniPoly::constant(c);
    for (int v = 0; v < p.nvars(); ++v) {
      auto& pv = pows[v];
      while (pv.size() <= e[v]) pv.push_back(pv.back() * lin[v]);
      term = term * pv[e[v]];
    }
    acc = acc + term;
  }
  return acc;
}

UniPoly restrict_to_line(const Polynomial& p, const Line3& line) {
  if (p.nvars() != 3) throw DimensionMismatch("restrict_to_line needs a trivariate polynomial");
  return restrict_parametric(p, line.origin, line.direction);
}

UniPoly restrict_planar(const Polynomial& p, const Vec2& origin, const Vec2& direction) {
  if (p.nvars() > 2) throw DimensionMismatch("restrict_planar needs <= 2 variables");
  return restrict_parametric(
      // Promote to the 3-variable evaluation path with a dead z coordinate.
      Polynomial::from_terms(3, [&] {
        std::vector<std::pair<Exponents, Rational>> ts;
        for (const auto& [e, c] : p.terms()) ts.emplace_back(e, c);
        return ts;
      }()),
      {origin[0], origin[1], Rational(0)}, {direction[0], direction[1], Rational(1)});
}

// --- resultant ------------------------------------------------------------

namespace {

// Fraction-free determinant over Q[x,y,z]; entries consumed in place.
Polynomial bareiss_determinant(std::vector<std::vector<Polynomial>>& m, int nvars) {
  const int n = static_cast<int>(m.size());
  if (n == 0) return Polynomial::constant(nvars, Rational(1));
  Polynomial prev = Polynomial::constant(nvars, Rational(1));
  int sign_flips = 0;
  for (int k = 0; k + 1 < n; ++k) {
    if (m[k][k].is_zero()) {
      int pivot = -1;
      for (int i = k + 1; i < n; ++i) {
        if (!m[i][k].is_zero()) {
          pivot = i;
          break;
        }
      }
      if (pivot < 0) return Polynomial(nvars);  // singular: determinant zero
      std::swap(m[k], m[pivot]);
      ++sign_flips;
    }
    for (int i = k + 1; i < n; ++i) {
      for (int j = k + 1; j < n; ++j) {
        Polynomial num = m[i][j] * m[k][k] - m[i][k] * m[k][j];
        m[i][j] = num.exact_div(prev);
      }
      m[i][k] = Polynomial(nvars);
    }
    prev = m[k][k];
  }
  Polynomial det = m[n - 1][n - 1];
  return (sign_flips % 2) ? det.scaled(Rational(-1)) : det;
}

}  // namespace

Polynomial resultant(const Polynomial& p, const Polynomial& q, int var) {
  if (p.nvars() != q.nvars()) throw DimensionMismatch("resultant: nvars mismatch");
  const int nvars = p.nvars();
  const int dp = p.degree_in(var);
  const int dq = q.degree_in(var);
  if (dp < 1 || dq < 1)
    throw DimensionMismatch("resultant requires positive degree in the eliminated variable");
  const int n = dp + dq;
  std::vector<std::vector<Polynomial>> m(n, std::vector<Polynomial>(n, Polynomial(nvars)));
  // dq rows of p's coefficients, then dp rows of q's, high degree first.
  for (int r = 0; r < dq; ++r)
    for (int k = 0; k <= dp; ++k) m[r][r + k] = p.coefficient_of(var, dp - k);
  for (int r = 0; r < dp; ++r)
    for (int k = 0; k <= dq; ++k) m[dq + r][r + k] = q.coefficient_of(var, dq - k);
  return bareiss_determinant(m, nvars);
}

Polynomial resultant_z(const Polynomial& p, const Polynomial& q) {
  if (p.nvars() != 3 || q.nvars() != 3)
    throw DimensionMismatch("resultant_z expects trivariate inputs");
  Polynomial r3 = resultant(p, q, 2);
  std::vector<std::pair<Exponents, Rational>> ts;
  for (const auto& [e, c] : r3.terms()) {
    POLYPART_CHECK(e[2] == 0, "resultant_z left z content behind");
    ts.emplace_back(e, c);
  }
  return Polynomial::from_terms(2, ts);
}

// --- Veronese -------------------------------------------------------------

std::size_t veronese_dimension(int d, int D) {
  // binom(D + d, d)
  std::size_t num = 1, den = 1;
  for (int i = 1; i <= d; ++i) {
    num *= static_cast<std::size_t>(D + i);
    den *= static_cast<std::size_t>(i);
  }
  return num / den;
}

std::vector<Exponents> monomials_up_to(int d, int D) {
  std::vector<Exponents> out;
  for (int deg = 0; deg <= D; ++deg) {
    std::vector<Exponents> level;
    if (d == 1) {
      level.push_back({static_cast<std::uint32_t>(deg), 0, 0});
    } else if (d == 2) {
      for (int a = deg; a >= 0; --a)
        level.push_back({static_cast<std::uint32_t>(a),
                         static_cast<std::uint32_t>(deg - a), 0});
    } else {
      for (int a = deg; a >= 0; --a)
        for (int b = deg - a; b >= 0; --b)
          level.push_back({static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b),
                           static_cast<std::uint32_t>(deg - a - b)});
    }
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

std::vector<Rational> veronese(std::span<const Rational> x, int D) {
  if (D < 1) throw InvalidArgument("veronese requires D >= 1");
  const int d = static_cast<int>(x.size());
  if (d < 1 || d > 3) throw DimensionMismatch("veronese supports 1..3 variables");
  std::array<std::vector<Rational>, 3> pows;
  for (int v = 0; v < d; ++v) {
    pows[v].push_back(Rational(1));
    for (int k = 1; k <= D; ++k) pows[v].push_back(pows[v].back() * x[v]);
  }
  auto monos = monomials_up_to(d, D);
  std::vector<Rational> out;
  out.reserve(monos.size());
  for (const auto& e : monos) {
    Rational v(1);
    for (int i = 0; i < d; ++i) v *= pows[i][e[i]];
    out.push_back(v);
  }
  return out;
}

}  // namespace polypart
