#include "doctest.h"

#include "polypart/depth.hpp"

using namespace polypart;

namespace {
Rational q(long n, long d = 1) {
  Rational r(n, d);
  r.canonicalize();
  return r;
}
Segment3 full_line(long ox, long oy, long oz, long dx, long dy, long dz, int id) {
  return Segment3{Line3{{q(ox), q(oy), q(oz)}, {q(dx), q(dy), q(dz)}, id}};
}

// l1 below l2 at (0,0), l2 below l3 at (1,1), l3 below l1 at (2,0).
std::vector<Segment3> cycle_gadget() {
  return {full_line(0, 0, 0, 1, 0, 0, 0),    // z = 0 along y = 0
          full_line(0, 0, 1, 1, 1, 0, 1),    // z = 1 along y = x
          full_line(0, 2, 5, 1, -1, -3, 2)}; // z = 5 - 3t along y = 2 - x
}

std::vector<Segment3> random_disjoint_lines(Rng& rng, int n) {
  std::vector<Segment3> out;
  while (static_cast<int>(out.size()) < n) {
    Segment3 cand{Line3{{rng.rational(40, 8), rng.rational(40, 8), rng.rational(40, 8)},
                        {q(1), rng.rational(4, 8), rng.rational(4, 8)},
                        static_cast<int>(out.size())}};
    bool ok = !cand.line.is_vertical() && !cand.line.has_zero_direction();
    for (const auto& prev : out) {
      if (!ok) break;
      try {
        auto vp = visibility_pair(prev, cand);
        if (vp && vp->p1[2] == vp->p2[2]) ok = false;
      } catch (const Degenerate&) {
        ok = false;
      }
    }
    if (ok) out.push_back(std::move(cand));
  }
  return out;
}

std::int64_t baseline_cuts(const std::vector<Segment3>& lines) {
  DepthOptions opts;
  opts.baseline = true;
  Rng rng(1);
  auto res = eliminate_cycles(lines, opts, rng);
  return res.stats.total_cuts;
}
}  // namespace

TEST_CASE("type1 cuts at zero-set crossings") {
  Polynomial z = Polynomial::variable(3, 2);
  Segment3 diag = full_line(0, 0, 0, 1, 0, 1, 0);
  auto cuts = type1_cuts(diag, z);
  REQUIRE(cuts.size() == 1);
  CHECK(cuts[0].t.equals_rational(q(0)));
  CHECK(cuts[0].kind == CutKind::Type1);

  Polynomial z2m1 = z * z - Polynomial::constant(3, q(1));
  Segment3 flat = full_line(0, 0, 0, 1, 0, 0, 1);
  CHECK(type1_cuts(flat, z2m1).empty());
  CHECK_THROWS_AS(type1_cuts(flat, z), LineInZeroSet);

  // Random degree-4 polynomial: at most 4 cuts.
  Rng rng(8);
  for (int i = 0; i < 10; ++i) {
    std::vector<std::pair<Exponents, Rational>> ts;
    for (int t = 0; t < 8; ++t) {
      Exponents e{static_cast<std::uint32_t>(rng.below(3)),
                  static_cast<std::uint32_t>(rng.below(2)),
                  static_cast<std::uint32_t>(rng.below(3))};
      if (e[0] + e[1] + e[2] > 4) continue;
      ts.emplace_back(e, rng.rational(6, 4));
    }
    Polynomial p = Polynomial::from_terms(3, ts);
    if (p.is_zero() || p.degree() < 1) continue;
    Segment3 line{Line3{{rng.rational(5, 4), rng.rational(5, 4), rng.rational(5, 4)},
                        {q(1), rng.rational(3, 4), rng.rational(3, 4)}, 7}};
    UniPoly u = restrict_to_line(p, line.line);
    if (u.is_zero()) continue;
    auto cuts = type1_cuts(line, p);
    CHECK(static_cast<int>(cuts.size()) <= p.degree());
  }
}

TEST_CASE("type2 cuts at discriminant crossings") {
  Polynomial x = Polynomial::variable(3, 0);
  Polynomial y = Polynomial::variable(3, 1);
  Polynomial z = Polynomial::variable(3, 2);
  Polynomial cone = z * z - (x * x + y * y);

  // Discriminant is -4(x^2 + y^2): only the origin. Line above y = 1: no cuts.
  Segment3 off = full_line(0, 1, 5, 1, 0, 0, 0);
  CHECK(type2_cuts(off, cone).empty());

  // Line over y = 0 crosses the origin: one cut at t = 0.
  Segment3 through = full_line(0, 0, 5, 1, 0, 0, 1);
  auto cuts = type2_cuts(through, cone);
  REQUIRE(cuts.size() == 1);
  CHECK(cuts[0].t.equals_rational(q(0)));
  CHECK(cuts[0].kind == CutKind::Type2);

  // z-free polynomial: no z content to analyze.
  CHECK_THROWS_AS(type2_cuts(off, x * x), InvalidArgument);

  // Per-line bound: deg(P)(deg(P) - 1).
  Polynomial p = cone * (z - x);
  Segment3 probe = full_line(0, 3, 1, 1, 1, 2, 2);
  auto c2 = type2_cuts(probe, p);
  CHECK(static_cast<int>(c2.size()) <= p.degree() * (p.degree() - 1));
}

TEST_CASE("discriminant parts cover the factored product") {
  Polynomial x = Polynomial::variable(3, 0);
  Polynomial y = Polynomial::variable(3, 1);
  Polynomial z = Polynomial::variable(3, 2);
  Polynomial cone = z * z - (x * x + y * y);
  Polynomial plane = z - x;       // z-linear
  Polynomial wall = x - Polynomial::constant(3, q(2));  // z-free

  auto parts = discriminant_parts({cone, plane, wall});
  // Parts: disc(cone), lc_z(plane) drops (constant), Res_z(cone, plane),
  // and the z-free wall itself.
  CHECK(parts.size() >= 2);
  std::int64_t bound = 0;
  for (const auto& part : parts) bound += part.degree();
  int p_deg = (cone * plane * wall).degree();
  CHECK(bound <= p_deg * (p_deg - 1));

  // Duplicate factors collapse.
  auto dup = discriminant_parts({cone, cone});
  auto solo = discriminant_parts({cone});
  CHECK(dup.size() == solo.size());
}

TEST_CASE("the 3-cycle gadget is cyclic before cutting and acyclic after") {
  auto gadget = cycle_gadget();
  // Sanity: the depth relation cycles. above(a, b) = +1 when a passes above b.
  CHECK(*above(gadget[1].line, gadget[0].line) == 1);
  CHECK(*above(gadget[2].line, gadget[1].line) == 1);
  CHECK(*above(gadget[0].line, gadget[2].line) == 1);

  // Uncut pieces: one per line; the graph is a 3-cycle.
  DepthGraph raw;
  raw.pieces = {{0, 0}, {1, 0}, {2, 0}};
  raw.edges = {{0, 1}, {1, 2}, {2, 0}};
  auto cycle = find_cycle(raw);
  REQUIRE(cycle.has_value());
  CHECK(cycle->size() == 3);

  DepthOptions opts;
  Rng rng(5);
  auto res = eliminate_cycles(gadget, opts, rng);
  CHECK(res.graph.acyclic);
  CHECK(res.stats.total_cuts >= 1);
  CHECK_FALSE(find_cycle(res.graph).has_value());
}

TEST_CASE("parallel lines need no cuts") {
  std::vector<Segment3> lines;
  for (int i = 0; i < 10; ++i) lines.push_back(full_line(0, i, i, 1, 0, 0, i));
  DepthOptions opts;
  Rng rng(3);
  auto res = eliminate_cycles(lines, opts, rng);
  CHECK(res.stats.total_cuts == 0);
  CHECK(res.graph.acyclic);
  CHECK(res.graph.edges.empty());
}

TEST_CASE("edge directions match exact height comparisons") {
  Rng data_rng(555);
  auto lines = random_disjoint_lines(data_rng, 12);
  DepthOptions opts;
  opts.n0 = 4;
  Rng rng(9);
  auto res = eliminate_cycles(lines, opts, rng);
  REQUIRE(res.graph.acyclic);
  for (const auto& [from, to] : res.graph.edges) {
    int ci = res.graph.pieces[static_cast<std::size_t>(from)].curve;
    int cj = res.graph.pieces[static_cast<std::size_t>(to)].curve;
    // from precedes to: the curve of `to` passes above the curve of `from`.
    CHECK(*above(lines[static_cast<std::size_t>(cj)].line,
                 lines[static_cast<std::size_t>(ci)].line) == 1);
  }
}

TEST_CASE("fifty random disjoint lines beat the all-pairs baseline") {
  Rng data_rng(2023);
  auto lines = random_disjoint_lines(data_rng, 50);
  DepthOptions opts;
  Rng rng(17);
  auto res = eliminate_cycles(lines, opts, rng);
  CHECK(res.graph.acyclic);
  CHECK_FALSE(find_cycle(res.graph).has_value());
  CHECK(res.stats.total_cuts < 50 * 49);
  // Pieces partition each line: slots = cuts + 1 per line.
  std::size_t expected_pieces = 0;
  for (const auto& lc : res.cuts) expected_pieces += lc.cuts.size() + 1;
  CHECK(res.graph.pieces.size() == expected_pieces);
}

TEST_CASE("baseline mode cuts every crossing pair") {
  auto gadget = cycle_gadget();
  CHECK(baseline_cuts(gadget) == 6);  // 3 crossings, both parties cut
}

TEST_CASE("non-disjoint input is rejected") {
  std::vector<Segment3> touching{full_line(0, 0, 0, 1, 0, 0, 0),
                                 full_line(0, 0, 0, 0, 1, 0, 1)};
  DepthOptions opts;
  Rng rng(2);
  CHECK_THROWS_AS(eliminate_cycles(touching, opts, rng), NonDisjointInput);

  std::vector<Segment3> vertical{full_line(0, 0, 0, 0, 0, 1, 0)};
  CHECK_THROWS_AS(eliminate_cycles(vertical, opts, rng), VerticalInput);
}

TEST_CASE("segments participate with their parameter ranges") {
  auto gadget = cycle_gadget();
  // Clip the third line so it misses the crossing with line 0 at t = 2.
  gadget[2].t_hi = ExtRat(q(3, 2));
  DepthOptions opts;
  Rng rng(5);
  auto res = eliminate_cycles(gadget, opts, rng);
  CHECK(res.graph.acyclic);
  // Without the l3-over-l0 crossing the relation had no cycle to begin with.
}
