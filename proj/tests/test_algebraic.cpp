#include "doctest.h"

#include "polypart/algebraic.hpp"
#include "polypart/rng.hpp"

using namespace polypart;

namespace {
Rational q(long n, long d = 1) {
  Rational r(n, d);
  r.canonicalize();
  return r;
}
}

TEST_CASE("simplest rational between") {
  CHECK(simplest_rational_between(q(-1), q(1)) == q(0));
  CHECK(simplest_rational_between(q(1, 5), q(1, 4)) == q(2, 9));
  CHECK(simplest_rational_between(q(3), q(4)) == q(7, 2));
  CHECK(simplest_rational_between(q(5, 2), q(9)) == q(3));
  CHECK(simplest_rational_between(q(-9), q(-5, 2)) == q(-3));
}

TEST_CASE("real roots of simple polynomials") {
  UniPoly t2m1({q(-1), q(0), q(1)});
  auto roots = real_roots(t2m1);
  REQUIRE(roots.size() == 2);
  CHECK(roots[0].root.equals_rational(q(-1)));
  CHECK(roots[1].root.equals_rational(q(1)));
  CHECK(roots[0].multiplicity == 1);

  UniPoly t2p1({q(1), q(0), q(1)});
  CHECK(real_roots(t2p1).empty());

  // (t-1)(t-2)(t-3) = t^3 - 6t^2 + 11t - 6
  UniPoly cubic({q(-6), q(11), q(-6), q(1)});
  auto r3 = real_roots(cubic);
  REQUIRE(r3.size() == 3);
  CHECK(r3[0].root.equals_rational(q(1)));
  CHECK(r3[1].root.equals_rational(q(2)));
  CHECK(r3[2].root.equals_rational(q(3)));

  CHECK_THROWS_AS(real_roots(UniPoly()), ZeroPolynomial);
}

TEST_CASE("multiplicities reported separately") {
  // (t-1)^2 (t+2)^3
  UniPoly a({q(-1), q(1)});
  UniPoly b({q(2), q(1)});
  UniPoly u = a * a * b * b * b;
  auto roots = real_roots(u);
  REQUIRE(roots.size() == 2);
  CHECK(roots[0].root.equals_rational(q(-2)));
  CHECK(roots[0].multiplicity == 3);
  CHECK(roots[1].root.equals_rational(q(1)));
  CHECK(roots[1].multiplicity == 2);
}

TEST_CASE("planted rational roots are recovered exactly") {
  Rng rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Rational> planted;
    UniPoly u = UniPoly::constant(q(1));
    int k = 2 + static_cast<int>(rng.below(4));
    for (int i = 0; i < k; ++i) {
      Rational r = rng.rational(6, 5);
      bool dup = false;
      for (const auto& x : planted) dup = dup || x == r;
      if (dup) continue;
      planted.push_back(r);
      u = u * UniPoly({-r, q(1)});
    }
    std::sort(planted.begin(), planted.end());
    auto roots = real_roots(u);
    REQUIRE(roots.size() == planted.size());
    for (std::size_t i = 0; i < planted.size(); ++i) {
      CHECK(roots[i].root.equals_rational(planted[i]));
      CHECK(roots[i].root.is_exact());
    }
  }
}

TEST_CASE("irrational roots isolate and order correctly") {
  // t^2 - 2: roots -sqrt2, sqrt2.
  UniPoly u({q(-2), q(0), q(1)});
  auto roots = real_roots(u);
  REQUIRE(roots.size() == 2);
  CHECK(roots[0].root.compare(roots[1].root) < 0);
  CHECK(roots[0].root.compare(q(-2)) > 0);
  CHECK(roots[0].root.compare(q(-1)) < 0);
  CHECK(roots[1].root.compare(q(1)) > 0);
  CHECK(roots[1].root.compare(q(3, 2)) < 0);
  CHECK_FALSE(roots[1].root.equals_rational(q(141421, 100000)));

  // sqrt2 from two different polynomials compares equal.
  UniPoly v({q(-4), q(0), q(0), q(0), q(1)});  // t^4 - 4 has real roots +-sqrt2
  auto rv = real_roots(v);
  REQUIRE(rv.size() == 2);
  CHECK(rv[1].root == roots[1].root);
  CHECK(rv[0].root == roots[0].root);
}

TEST_CASE("sign is certified between consecutive roots") {
  // Gaps between sorted roots have constant sign; sample each gap.
  UniPoly u = UniPoly({q(-1), q(1)}) * UniPoly({q(-3), q(1)}) * UniPoly({q(2), q(1)});
  auto roots = real_roots(u);
  REQUIRE(roots.size() == 3);
  std::vector<Rational> probes;
  probes.push_back(roots[0].root.lower() - 1);
  for (std::size_t i = 0; i + 1 < roots.size(); ++i)
    probes.push_back(rational_between(roots[i].root, roots[i + 1].root));
  probes.push_back(roots.back().root.upper() + 1);
  // Cubic with positive leading coefficient: signs alternate -,+,-,+.
  int expected[] = {-1, 1, -1, 1};
  for (int i = 0; i < 4; ++i) CHECK(u.sign_at(probes[i]) == expected[i]);
}

TEST_CASE("sort_unique merges duplicate cut parameters") {
  UniPoly u({q(-2), q(0), q(1)});
  auto r = distinct_real_roots(u);
  std::vector<AlgebraicReal> values{r[1], AlgebraicReal(q(0)), r[0], r[1],
                                    AlgebraicReal(q(0))};
  auto sorted = sort_unique(values);
  REQUIRE(sorted.size() == 3);
  CHECK(sorted[0] == r[0]);
  CHECK(sorted[1].equals_rational(q(0)));
  CHECK(sorted[2] == r[1]);
}
