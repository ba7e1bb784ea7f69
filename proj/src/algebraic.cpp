#include "polypart/algebraic.hpp"

#include <algorithm>
#include <sstream>

namespace polypart {

namespace {

// Taylor shift: coefficients of u(t + a).
UniPoly taylor_shift(const UniPoly& u, const Rational& a) {
  if (u.is_zero() || a == 0) return u;
  std::vector<Rational> c = u.coeffs();
  const int n = static_cast<int>(c.size());
  for (int k = 0; k < n - 1; ++k)
    for (int i = n - 2; i >= k; --i) c[i] += a * c[i + 1];
  return UniPoly(std::move(c));
}

UniPoly scale_arg(const UniPoly& u, const Rational& s) {  // u(s * t)
  std::vector<Rational> c = u.coeffs();
  Rational pw(1);
  for (std::size_t i = 1; i < c.size(); ++i) {
    pw *= s;
    c[i] *= pw;
  }
  return UniPoly(std::move(c));
}

UniPoly reverse_coeffs(const UniPoly& u) {
  std::vector<Rational> c = u.coeffs();
  std::reverse(c.begin(), c.end());
  return UniPoly(std::move(c));
}

std::vector<AlgebraicReal> isolate_squarefree(UniPoly u);

}  // namespace

int sign_variations(const std::vector<Rational>& coeffs) {
  int v = 0, last = 0;
  for (const auto& c : coeffs) {
    int s = sgn(c);
    if (s == 0) continue;
    if (last != 0 && s != last) ++v;
    last = s;
  }
  return v;
}

int descartes_interval_bound(const UniPoly& u, const Rational& a, const Rational& b) {
  POLYPART_CHECK(a < b, "descartes bound needs a < b");
  // Map (a, b) onto (0, 1), then (0, 1) onto (0, inf).
  UniPoly s = taylor_shift(scale_arg(u, b - a), a / (b - a));
  // Count variations of (1+x)^n * s(1/(1+x)) = shift-by-1 of reversed s.
  UniPoly r = taylor_shift(reverse_coeffs(s), Rational(1));
  return sign_variations(r.coeffs());
}

Rational root_bound(const UniPoly& u) {
  POLYPART_CHECK(!u.is_zero(), "root bound of zero polynomial");
  Rational m(0);
  const Rational lead = rational_abs(u.leading());
  for (int i = 0; i < u.degree(); ++i) {
    Rational q = rational_abs(u.coeff(i)) / lead;
    if (q > m) m = q;
  }
  return Rational(floor_int(m) + 2);  // integer strictly beyond the Cauchy bound
}

AlgebraicReal::AlgebraicReal(UniPoly squarefree, Rational lo, Rational hi)
    : poly_(std::move(squarefree)), lo_(std::move(lo)), hi_(std::move(hi)) {
  POLYPART_CHECK(lo_ < hi_, "isolating interval empty");
  POLYPART_CHECK(poly_.sign_at(lo_) != 0 && poly_.sign_at(hi_) != 0,
                 "isolating interval endpoints must avoid roots");
}

void AlgebraicReal::refine() {
  if (is_exact()) return;
  Rational m = (lo_ + hi_) / 2;
  int sm = poly_.sign_at(m);
  if (sm == 0) {
    exact_ = m;
    return;
  }
  if (sm == poly_.sign_at(lo_)) {
    lo_ = m;
  } else {
    hi_ = m;
  }
}

void AlgebraicReal::refine_below(const Rational& width) {
  while (!is_exact() && hi_ - lo_ >= width) refine();
}

bool AlgebraicReal::try_exact(int max_steps) {
  if (is_exact()) return true;
  int sign_lo = poly_.sign_at(lo_);
  for (int step = 0; step < max_steps; ++step) {
    Rational r = simplest_rational_between(lo_, hi_);
    int s = poly_.sign_at(r);
    if (s == 0) {
      exact_ = r;
      return true;
    }
    if (s == sign_lo) {
      lo_ = r;
    } else {
      hi_ = r;
    }
  }
  return false;
}

int AlgebraicReal::compare(const Rational& q) const {
  if (is_exact()) return *exact_ < q ? -1 : (*exact_ == q ? 0 : 1);
  if (!(lo_ < q)) return 1;   // q <= lo < root
  if (!(q < hi_)) return -1;  // root < hi <= q
  int s = poly_.sign_at(q);
  if (s == 0) return 0;
  // poly keeps the sign of poly(lo) on (lo, root).
  return s == poly_.sign_at(lo_) ? 1 : -1;
}

int AlgebraicReal::compare(const AlgebraicReal& o) const {
  if (o.is_exact()) return compare(*o.exact_);
  if (is_exact()) return -o.compare(*exact_);
  // Both intervals: refine copies and try to separate cheaply first.
  AlgebraicReal a = *this, b = o;
  for (int round = 0; round < 4; ++round) {
    if (!(b.lo_ < a.hi_)) return -1;
    if (!(a.lo_ < b.hi_)) return 1;
    a.refine();
    b.refine();
    if (a.is_exact()) return -b.compare(*a.exact_);
    if (b.is_exact()) return a.compare(*b.exact_);
  }
  // Persistent overlap: decide equality through a common factor. A root of
  // g = gcd inside both isolating intervals is the unique root of each.
  UniPoly g = unipoly_gcd(a.poly_, b.poly_);
  if (g.degree() > 0) {
    for (const auto& gamma : isolate_squarefree(g)) {
      bool in_a = gamma.compare(a.lo_) > 0 && gamma.compare(a.hi_) < 0;
      bool in_b = gamma.compare(b.lo_) > 0 && gamma.compare(b.hi_) < 0;
      if (in_a && in_b) return 0;
    }
  }
  // Distinct roots: refinement must eventually separate them.
  while (true) {
    if (!(b.lo_ < a.hi_)) return -1;
    if (!(a.lo_ < b.hi_)) return 1;
    a.refine();
    b.refine();
    if (a.is_exact()) return -b.compare(*a.exact_);
    if (b.is_exact()) return a.compare(*b.exact_);
  }
}

double AlgebraicReal::to_double() const {
  if (is_exact()) return exact_->get_d();
  AlgebraicReal c = *this;
  c.refine_below(Rational(1, 1000000));
  Rational mid = (c.lower() + c.upper()) / 2;
  return mid.get_d();
}

std::string AlgebraicReal::to_string() const {
  if (is_exact()) return rational_to_string(*exact_);
  std::ostringstream os;
  os << "root(" << poly_.to_string() << ", (" << rational_to_string(lo_) << ", "
     << rational_to_string(hi_) << "))";
  return os.str();
}

int AlgebraicReal::sign_in_interval(const Rational& q) const { return poly_.sign_at(q); }

namespace {

// Isolate all roots of a squarefree primitive polynomial.
std::vector<AlgebraicReal> isolate_squarefree(UniPoly u) {
  std::vector<AlgebraicReal> out;
  if (u.degree() < 1) return out;
  Rational bound = root_bound(u);
  std::vector<std::pair<Rational, Rational>> stack{{-bound, bound}};
  while (!stack.empty()) {
    auto [lo, hi] = stack.back();
    stack.pop_back();
    if (u.degree() < 1) break;
    int v = descartes_interval_bound(u, lo, hi);
    if (v == 0) continue;
    if (v == 1) {
      out.emplace_back(u, lo, hi);
      continue;
    }
    Rational m = (lo + hi) / 2;
    if (u.sign_at(m) == 0) {
      out.emplace_back(AlgebraicReal(m));
      u = u.exact_div(UniPoly({-m, Rational(1)})).primitive_part();
      if (u.sign_at(lo) == 0 || u.sign_at(hi) == 0) {
        // Cannot happen: endpoints were certified non-roots of the parent.
        POLYPART_CHECK(false, "deflation exposed an endpoint root");
      }
    }
    stack.emplace_back(lo, m);
    stack.emplace_back(m, hi);
  }
  std::sort(out.begin(), out.end(),
            [](const AlgebraicReal& a, const AlgebraicReal& b) { return a.compare(b) < 0; });
  for (auto& r : out) r.try_exact(32);
  return out;
}

}  // namespace

std::vector<RootWithMultiplicity> real_roots(const UniPoly& u) {
  if (u.is_zero()) throw ZeroPolynomial("real_roots of the zero polynomial");
  std::vector<RootWithMultiplicity> out;
  for (const auto& [factor, mult] : squarefree_decomposition(u)) {
    for (auto& r : isolate_squarefree(factor)) out.push_back({std::move(r), mult});
  }
  std::sort(out.begin(), out.end(), [](const RootWithMultiplicity& a,
                                       const RootWithMultiplicity& b) {
    return a.root.compare(b.root) < 0;
  });
  return out;
}

std::vector<AlgebraicReal> distinct_real_roots(const UniPoly& u) {
  std::vector<AlgebraicReal> out;
  for (auto& rm : real_roots(u)) out.push_back(std::move(rm.root));
  return out;
}

std::vector<AlgebraicReal> sort_unique(std::vector<AlgebraicReal> values) {
  std::sort(values.begin(), values.end(),
            [](const AlgebraicReal& a, const AlgebraicReal& b) { return a.compare(b) < 0; });
  std::vector<AlgebraicReal> out;
  for (auto& v : values) {
    if (out.empty() || out.back().compare(v) != 0) out.push_back(std::move(v));
  }
  return out;
}

Rational rational_between(const AlgebraicReal& a, const AlgebraicReal& b) {
  POLYPART_CHECK(a.compare(b) < 0, "rational_between requires a < b");
  AlgebraicReal x = a, y = b;
  while (!(x.upper() < y.lower())) {
    bool progressed = false;
    if (!x.is_exact()) {
      x.refine();
      progressed = true;
    }
    if (!y.is_exact()) {
      y.refine();
      progressed = true;
    }
    if (!progressed) return (x.exact_value() + y.exact_value()) / 2;
  }
  return (x.upper() + y.lower()) / 2;
}

}  // namespace polypart
