#include "doctest.h"

#include <set>

#include "polypart/cutting.hpp"

using namespace polypart;

namespace {
Rational q(long n, long d = 1) {
  Rational r(n, d);
  r.canonicalize();
  return r;
}

PlanarArc seg2d(long ax, long ay, long bx, long by) {
  // Planar segment from (ax, ay) to (bx, by), bx > ax.
  PlanarArc arc;
  arc.b = q(by - ay) / q(bx - ax);
  arc.a = q(ay) - arc.b * q(ax);
  arc.x_lo = ExtRat(q(ax));
  arc.x_hi = ExtRat(q(bx));
  return arc;
}

// Independent recount: merge per-slab gaps across slabs with union-find.
int oracle_trapezoid_count(const TrapezoidalDecomposition& dec) {
  const auto& xs = dec.event_xs;
  struct Gap {
    int floor, ceiling;
  };
  std::vector<std::vector<Gap>> slab_gaps;
  std::set<Rational> wall_set(dec.wall_xs.begin(), dec.wall_xs.end());
  for (std::size_t slab = 0; slab <= xs.size(); ++slab) {
    Rational probe;
    if (xs.empty())
      probe = q(0);
    else if (slab == 0)
      probe = xs.front() - 1;
    else if (slab == xs.size())
      probe = xs.back() + 1;
    else
      probe = (xs[slab - 1] + xs[slab]) / 2;
    std::vector<int> active;
    for (std::size_t ai = 0; ai < dec.arcs.size(); ++ai) {
      if (dec.arcs[ai].x_lo < ExtRat(probe) && ExtRat(probe) < dec.arcs[ai].x_hi)
        active.push_back(static_cast<int>(ai));
    }
    std::sort(active.begin(), active.end(), [&](int ia, int ib) {
      return dec.arcs[static_cast<std::size_t>(ia)].y_at(probe) <
             dec.arcs[static_cast<std::size_t>(ib)].y_at(probe);
    });
    std::vector<Gap> gaps;
    for (std::size_t g = 0; g <= active.size(); ++g) {
      gaps.push_back({g == 0 ? -1 : active[g - 1],
                      g < active.size() ? active[g] : -1});
    }
    slab_gaps.push_back(std::move(gaps));
  }
  int count = 0;
  for (std::size_t slab = 0; slab < slab_gaps.size(); ++slab) {
    bool wall_left = slab > 0 && wall_set.count(xs[slab - 1]) > 0;
    for (const auto& gap : slab_gaps[slab]) {
      bool continues = false;
      if (slab > 0 && !wall_left) {
        for (const auto& prev : slab_gaps[slab - 1])
          continues = continues ||
                      (prev.floor == gap.floor && prev.ceiling == gap.ceiling);
      }
      if (!continues) ++count;  // a new run starts here
    }
  }
  return count;
}
}  // namespace

TEST_CASE("empty input gives one unbounded trapezoid") {
  auto dec = trapezoidal_decomposition({});
  REQUIRE(dec.traps.size() == 1);
  CHECK(dec.traps[0].floor == -1);
  CHECK(dec.traps[0].ceiling == -1);
  CHECK(dec.locate({q(3), q(-7)}) == 0);
}

TEST_CASE("one bounded segment gives four trapezoids") {
  auto dec = trapezoidal_decomposition({seg2d(0, 0, 4, 2)});
  CHECK(dec.traps.size() == 4);
  CHECK(oracle_trapezoid_count(dec) == 4);
  // left slab, above, below, right slab
  CHECK(dec.locate({q(-1), q(0)}) >= 0);
  CHECK(dec.locate({q(2), q(5)}) >= 0);
  CHECK(dec.locate({q(2), q(-5)}) >= 0);
  CHECK(dec.locate({q(5), q(0)}) >= 0);
  CHECK(dec.locate({q(2), q(1)}) == -1);  // on the segment
  CHECK(dec.locate({q(0), q(7)}) == -1);  // on a wall
}

TEST_CASE("two crossing segments match the oracle count") {
  auto dec = trapezoidal_decomposition({seg2d(0, 0, 4, 4), seg2d(1, 5, 5, -3)});
  CHECK(oracle_trapezoid_count(dec) == static_cast<int>(dec.traps.size()));
  // Distinct probes fall into distinct trapezoids exactly once.
  std::vector<Vec2> probes{{q(-1), q(0)}, {q(2), q(1, 3)}, {q(2), q(10)},
                           {q(2), q(-10)}, {q(9), q(0)}, {q(3, 2), q(2)}};
  for (const auto& p : probes) {
    int t = dec.locate(p);
    CHECK(t >= 0);
  }
}

TEST_CASE("random segment soup is covered exactly once") {
  Rng rng(33);
  std::vector<PlanarArc> arcs;
  for (int i = 0; i < 7; ++i) {
    long ax = static_cast<long>(rng.below(12));
    long bx = ax + 1 + static_cast<long>(rng.below(8));
    arcs.push_back(seg2d(ax, static_cast<long>(rng.below(9)) - 4, bx,
                         static_cast<long>(rng.below(9)) - 4));
  }
  auto dec = trapezoidal_decomposition(arcs);
  CHECK(oracle_trapezoid_count(dec) == static_cast<int>(dec.traps.size()));
  int hits = 0;
  for (int i = 0; i < 200; ++i) {
    Vec2 p{rng.rational(14, 64), rng.rational(14, 64)};
    int t = dec.locate(p);
    if (t < 0) continue;  // boundary tie
    ++hits;
    // Interiors are disjoint: recount membership directly.
    int members = 0;
    for (std::size_t ti = 0; ti < dec.traps.size(); ++ti) {
      const auto& tr = dec.traps[ti];
      if (!(tr.x_lo < ExtRat(p[0]) && ExtRat(p[0]) < tr.x_hi)) continue;
      bool above_floor =
          tr.floor < 0 || dec.arcs[static_cast<std::size_t>(tr.floor)].y_at(p[0]) < p[1];
      bool below_ceiling =
          tr.ceiling < 0 ||
          p[1] < dec.arcs[static_cast<std::size_t>(tr.ceiling)].y_at(p[0]);
      if (above_floor && below_ceiling) ++members;
    }
    CHECK(members == 1);
  }
  CHECK(hits > 150);
}

TEST_CASE("vertical arcs act as full walls") {
  PlanarArc wall;
  wall.vertical = true;
  wall.x_at = q(2);
  auto dec = trapezoidal_decomposition({wall, seg2d(0, 0, 4, 0)});
  // The segment splits at the wall: above/below on each side + 2 end slabs.
  CHECK(dec.traps.size() == 6);
  CHECK(oracle_trapezoid_count(dec) == 6);
}

namespace {
Segment3 full_line(long ox, long oy, long oz, long dx, long dy, long dz, int id) {
  return Segment3{Line3{{q(ox), q(oy), q(oz)}, {q(dx), q(dy), q(dz)}, id}};
}

std::vector<Segment3> random_lines(Rng& rng, int n) {
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
}  // namespace

TEST_CASE("second_stage keeps acceptable cells and refines the rest") {
  Rng data_rng(4242);
  auto lines = random_lines(data_rng, 40);
  StageOneOptions sopts;
  sopts.D = 2;
  Rng rng(12);
  auto stage1 = first_stage(lines, sopts, rng);

  CuttingOptions copts;
  copts.D = sopts.D;
  Rng rng2(13);
  auto full = second_stage(std::move(stage1), lines, copts, rng2);

  std::size_t unacceptable = 0;
  for (const auto& cell : full.stage1.cells)
    if (!cell.acceptable) ++unacceptable;
  CHECK(full.refinements.size() == unacceptable);

  const std::int64_t n = static_cast<std::int64_t>(lines.size());
  for (const auto& ref : full.refinements) {
    for (const auto& ids : ref.trap_curves) {
      CHECK(static_cast<std::int64_t>(ids.size()) * copts.D * copts.D <=
            copts.a_cut * n);
    }
  }
  CHECK(full.cell_count >= static_cast<std::int64_t>(full.stage1.cells.size()) -
                               static_cast<std::int64_t>(unacceptable));

  // Coverage probes: interior points land in exactly one output cell.
  Rng probe_rng(7);
  int located = 0;
  for (int i = 0; i < 100; ++i) {
    Vec3 p{probe_rng.rational(30, 32), probe_rng.rational(30, 32),
           probe_rng.rational(30, 32)};
    auto loc = locate_point(full, p);
    if (loc.kind == CellLocation::Boundary) continue;
    ++located;
  }
  CHECK(located > 80);
}

TEST_CASE("refine_cell handles a cell with no curves") {
  // A synthetic stage-one result with one empty unacceptable cell.
  StageOneResult stage1;
  stage1.factors.push_back(Polynomial::variable(3, 2));
  StageCell cell;
  cell.signs = {1};
  cell.acceptable = false;
  stage1.cells.push_back(cell);
  stage1.trace.traces = {};
  CuttingOptions opts;
  opts.D = 2;
  Rng rng(5);
  auto ref = refine_cell(stage1, {}, 0, 10, opts, rng);
  CHECK(ref.arcs.empty());
  REQUIRE(ref.decomposition.traps.size() == 1);
  CHECK(ref.trap_curves[0].empty());
}

TEST_CASE("parallel projections refine cleanly") {
  // Many parallel lines: no crossings, the sampled slabs bound each trapezoid
  // population directly.
  std::vector<Segment3> lines;
  for (int i = 0; i < 30; ++i) lines.push_back(full_line(0, i, i, 1, 0, 0, i));
  StageOneOptions sopts;
  sopts.D = 3;
  Rng rng(6);
  auto stage1 = first_stage(lines, sopts, rng);
  REQUIRE(stage1.cells.size() == 1);
  CHECK_FALSE(stage1.cells[0].acceptable);

  CuttingOptions copts;
  copts.D = 3;
  copts.a_cut = 4;
  Rng rng2(8);
  auto full = second_stage(std::move(stage1), lines, copts, rng2);
  REQUIRE(full.refinements.size() == 1);
  const std::int64_t n = 30;
  for (const auto& ids : full.refinements[0].trap_curves)
    CHECK(static_cast<std::int64_t>(ids.size()) * 9 <= copts.a_cut * n);
}
