#include "polypart/cutting.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "polypart/parallel.hpp"

namespace polypart {

namespace {

// Open interval intersection helpers over ExtRat bounds.
struct OpenInterval {
  ExtRat lo = ExtRat::neg_inf();
  ExtRat hi = ExtRat::pos_inf();
  bool empty() const { return !(lo < hi); }
};

OpenInterval intersect(const OpenInterval& a, const OpenInterval& b) {
  OpenInterval r;
  r.lo = a.lo < b.lo ? b.lo : a.lo;
  r.hi = a.hi < b.hi ? a.hi : b.hi;
  return r;
}

// Restrict {x : alpha + beta * x > 0} onto the interval.
OpenInterval clip_linear_positive(OpenInterval iv, const Rational& alpha,
                                  const Rational& beta) {
  if (beta == 0) {
    if (alpha > 0) return iv;
    return OpenInterval{ExtRat(Rational(0)), ExtRat(Rational(0))};  // empty
  }
  Rational root = -alpha / beta;
  OpenInterval half;
  if (beta > 0) {
    half.lo = ExtRat(root);
  } else {
    half.hi = ExtRat(root);
  }
  return intersect(iv, half);
}

Rational slab_probe(const std::vector<Rational>& events, std::size_t slab) {
  if (events.empty()) return Rational(0);
  if (slab == 0) return events.front() - 1;
  if (slab == events.size()) return events.back() + 1;
  return (events[slab - 1] + events[slab]) / 2;
}

}  // namespace

TrapezoidalDecomposition trapezoidal_decomposition(const std::vector<PlanarArc>& input) {
  TrapezoidalDecomposition out;
  for (const auto& arc : input) {
    if (arc.vertical) {
      out.wall_xs.push_back(arc.x_at);
    } else {
      out.arcs.push_back(arc);
    }
  }

  std::set<Rational> events(out.wall_xs.begin(), out.wall_xs.end());
  for (const auto& arc : out.arcs) {
    if (arc.x_lo.finite()) events.insert(arc.x_lo.value());
    if (arc.x_hi.finite()) events.insert(arc.x_hi.value());
  }
  for (std::size_t i = 0; i < out.arcs.size(); ++i) {
    for (std::size_t j = i + 1; j < out.arcs.size(); ++j) {
      const auto& p = out.arcs[i];
      const auto& q = out.arcs[j];
      if (p.b == q.b) {
        if (p.a == q.a) {
          OpenInterval overlap = intersect({p.x_lo, p.x_hi}, {q.x_lo, q.x_hi});
          if (!overlap.empty())
            throw Degenerate("overlapping collinear arcs in the decomposition input");
        }
        continue;
      }
      Rational x = (q.a - p.a) / (p.b - q.b);
      OpenInterval both = intersect({p.x_lo, p.x_hi}, {q.x_lo, q.x_hi});
      if (both.lo < ExtRat(x) && ExtRat(x) < both.hi) events.insert(x);
    }
  }
  out.event_xs.assign(events.begin(), events.end());
  std::set<Rational> wall_set(out.wall_xs.begin(), out.wall_xs.end());

  // Sweep the slabs; a trapezoid is a maximal run of an adjacent
  // (floor, ceiling) pair across consecutive slabs.
  struct RunKey {
    int floor, ceiling;
    bool operator<(const RunKey& o) const {
      return floor != o.floor ? floor < o.floor : ceiling < o.ceiling;
    }
  };
  std::map<RunKey, ExtRat> open_runs;  // -> run start
  const std::size_t slabs = out.event_xs.size() + 1;
  for (std::size_t slab = 0; slab < slabs; ++slab) {
    ExtRat slab_lo = slab == 0 ? ExtRat::neg_inf() : ExtRat(out.event_xs[slab - 1]);
    ExtRat slab_hi =
        slab == out.event_xs.size() ? ExtRat::pos_inf() : ExtRat(out.event_xs[slab]);
    Rational probe = slab_probe(out.event_xs, slab);

    std::vector<int> active;
    for (std::size_t ai = 0; ai < out.arcs.size(); ++ai) {
      const auto& arc = out.arcs[ai];
      if (!(arc.x_lo < slab_hi) || !(slab_lo < arc.x_hi)) continue;
      if (slab_lo < arc.x_lo || arc.x_hi < slab_hi) continue;  // partial cover
      active.push_back(static_cast<int>(ai));
    }
    std::sort(active.begin(), active.end(), [&](int ia, int ib) {
      Rational ya = out.arcs[static_cast<std::size_t>(ia)].y_at(probe);
      Rational yb = out.arcs[static_cast<std::size_t>(ib)].y_at(probe);
      POLYPART_CHECK(ya != yb, "two arcs coincide inside a slab");
      return ya < yb;
    });

    // gaps: (-inf, a0), (a0, a1), ..., (a_last, +inf)
    std::set<RunKey> present;
    for (std::size_t g = 0; g <= active.size(); ++g) {
      int floor = g == 0 ? -1 : active[g - 1];
      int ceiling = g < active.size() ? active[g] : -1;
      present.insert({floor, ceiling});
    }

    bool wall_here = slab > 0 && wall_set.count(out.event_xs[slab - 1]) > 0;
    std::vector<RunKey> to_close;
    for (const auto& [key, start] : open_runs) {
      if (wall_here || !present.count(key)) to_close.push_back(key);
    }
    for (const auto& key : to_close) {
      Trapezoid t;
      t.x_lo = open_runs[key];
      t.x_hi = slab_lo;
      t.floor = key.floor;
      t.ceiling = key.ceiling;
      out.traps.push_back(t);
      open_runs.erase(key);
    }
    for (const auto& key : present) {
      if (!open_runs.count(key)) open_runs.emplace(key, slab_lo);
    }
  }
  for (const auto& [key, start] : open_runs) {
    Trapezoid t;
    t.x_lo = start;
    t.x_hi = ExtRat::pos_inf();
    t.floor = key.floor;
    t.ceiling = key.ceiling;
    out.traps.push_back(t);
  }
  return out;
}

int TrapezoidalDecomposition::locate(const Vec2& q) const {
  for (const auto& w : wall_xs)
    if (q[0] == w) return -1;
  for (const auto& x : event_xs)
    if (q[0] == x) return -1;
  for (const auto& arc : arcs) {
    if (!(arc.x_lo < ExtRat(q[0]) && ExtRat(q[0]) < arc.x_hi)) continue;
    if (arc.y_at(q[0]) == q[1]) return -1;
  }
  for (std::size_t ti = 0; ti < traps.size(); ++ti) {
    const auto& t = traps[ti];
    if (!(t.x_lo < ExtRat(q[0]) && ExtRat(q[0]) < t.x_hi)) continue;
    if (t.floor >= 0) {
      if (!(arcs[static_cast<std::size_t>(t.floor)].y_at(q[0]) < q[1])) continue;
    }
    if (t.ceiling >= 0) {
      if (!(q[1] < arcs[static_cast<std::size_t>(t.ceiling)].y_at(q[0]))) continue;
    }
    return static_cast<int>(ti);
  }
  return -1;
}

PlanarArc arc_of_piece(const Segment3& seg, const CurveTrace& trace, int piece_index,
                       int curve_index) {
  PlanarArc arc;
  arc.curve = curve_index;
  arc.piece = piece_index;
  const Line3& line = seg.line;

  // Outer rational parameter bounds for the piece.
  ExtRat t_lo = seg.t_lo, t_hi = seg.t_hi;
  if (piece_index > 0) {
    AlgebraicReal c = trace.cuts[static_cast<std::size_t>(piece_index - 1)];
    c.refine_below(Rational(1, 16));
    t_lo = ExtRat(c.lower());
  }
  if (piece_index < static_cast<int>(trace.cuts.size())) {
    AlgebraicReal c = trace.cuts[static_cast<std::size_t>(piece_index)];
    c.refine_below(Rational(1, 16));
    t_hi = ExtRat(c.upper());
  }

  const Rational& dx = line.direction[0];
  const Rational& dy = line.direction[1];
  if (dx == 0) {
    arc.vertical = true;
    arc.x_at = line.origin[0];
    // y runs along dy; outer bounds from the t-interval.
    if (dy > 0) {
      if (t_lo.finite()) arc.y_lo = ExtRat(line.origin[1] + dy * t_lo.value());
      if (t_hi.finite()) arc.y_hi = ExtRat(line.origin[1] + dy * t_hi.value());
    } else {
      if (t_hi.finite()) arc.y_lo = ExtRat(line.origin[1] + dy * t_hi.value());
      if (t_lo.finite()) arc.y_hi = ExtRat(line.origin[1] + dy * t_lo.value());
    }
    return arc;
  }
  arc.b = dy / dx;
  arc.a = line.origin[1] - arc.b * line.origin[0];
  auto x_of = [&](const ExtRat& t) -> Rational { return line.origin[0] + dx * t.value(); };
  if (dx > 0) {
    if (t_lo.finite()) arc.x_lo = ExtRat(x_of(t_lo));
    if (t_hi.finite()) arc.x_hi = ExtRat(x_of(t_hi));
  } else {
    if (t_hi.finite()) arc.x_lo = ExtRat(x_of(t_hi));
    if (t_lo.finite()) arc.x_hi = ExtRat(x_of(t_lo));
  }
  return arc;
}

namespace {

bool arc_meets_trapezoid(const PlanarArc& arc, const Trapezoid& trap,
                         const TrapezoidalDecomposition& dec) {
  if (arc.vertical) {
    if (!(trap.x_lo < ExtRat(arc.x_at) && ExtRat(arc.x_at) < trap.x_hi)) return false;
    OpenInterval y{arc.y_lo, arc.y_hi};
    if (trap.floor >= 0) {
      ExtRat fy(dec.arcs[static_cast<std::size_t>(trap.floor)].y_at(arc.x_at));
      if (y.lo < fy) y.lo = fy;
    }
    if (trap.ceiling >= 0) {
      ExtRat cy(dec.arcs[static_cast<std::size_t>(trap.ceiling)].y_at(arc.x_at));
      if (cy < y.hi) y.hi = cy;
    }
    return !y.empty();
  }
  OpenInterval x = intersect({arc.x_lo, arc.x_hi}, {trap.x_lo, trap.x_hi});
  if (x.empty()) return false;
  if (trap.floor >= 0) {
    const auto& f = dec.arcs[static_cast<std::size_t>(trap.floor)];
    x = clip_linear_positive(x, arc.a - f.a, arc.b - f.b);
    if (x.empty()) return false;
  }
  if (trap.ceiling >= 0) {
    const auto& c = dec.arcs[static_cast<std::size_t>(trap.ceiling)];
    x = clip_linear_positive(x, c.a - arc.a, c.b - arc.b);
    if (x.empty()) return false;
  }
  return true;
}

}  // namespace

CellRefinement refine_cell(const StageOneResult& stage1,
                           const std::vector<Segment3>& curves, int cell_index,
                           long n_total, const CuttingOptions& opts, Rng& rng) {
  const StageCell& cell = stage1.cells[static_cast<std::size_t>(cell_index)];
  CellRefinement out;
  out.cell_index = cell_index;

  for (int ci : cell.curves) {
    const Segment3& seg = curves[static_cast<std::size_t>(ci)];
    if (seg.line.is_vertical()) {
      out.vertical_curves.push_back(ci);
      continue;
    }
    const CurveTrace& trace = stage1.trace.traces[static_cast<std::size_t>(ci)];
    for (std::size_t pi = 0; pi < trace.piece_signs.size(); ++pi) {
      if (trace.piece_signs[pi] != cell.signs) continue;
      out.arcs.push_back(arc_of_piece(seg, trace, static_cast<int>(pi), ci));
    }
  }

  // p = min(1/2, c * D^2 / n)
  Rational p(opts.sample_c_num * static_cast<long>(opts.D) * opts.D,
             std::max(1L, opts.sample_c_den * n_total));
  p.canonicalize();
  if (p > Rational(1, 2)) p = Rational(1, 2);

  const std::int64_t budget_num =
      static_cast<std::int64_t>(opts.a_cut) * static_cast<std::int64_t>(n_total);
  for (int attempt = 0; attempt <= opts.resample_budget; ++attempt) {
    out.sampled.clear();
    std::vector<PlanarArc> sample;
    for (std::size_t ai = 0; ai < out.arcs.size(); ++ai) {
      if (rng.bernoulli(p)) {
        out.sampled.push_back(static_cast<int>(ai));
        sample.push_back(out.arcs[ai]);
      }
    }
    out.decomposition = trapezoidal_decomposition(sample);
    out.trap_curves.assign(out.decomposition.traps.size(), {});

    bool ok = true;
    for (std::size_t ti = 0; ti < out.decomposition.traps.size() && ok; ++ti) {
      std::set<int> ids;
      for (const auto& arc : out.arcs) {
        if (arc_meets_trapezoid(arc, out.decomposition.traps[ti], out.decomposition))
          ids.insert(arc.curve);
      }
      for (int vc : out.vertical_curves) {
        const Line3& vline = curves[static_cast<std::size_t>(vc)].line;
        Vec2 q{vline.origin[0], vline.origin[1]};
        if (out.decomposition.locate(q) == static_cast<int>(ti)) ids.insert(vc);
      }
      out.trap_curves[ti].assign(ids.begin(), ids.end());
      std::int64_t count = static_cast<std::int64_t>(ids.size());
      ok = count * opts.D * opts.D <= budget_num;
    }
    if (ok) {
      out.resamples = attempt;
      return out;
    }
  }
  throw ResampleBudgetExhausted("cell " + std::to_string(cell_index) + " kept a crowded trapezoid after " +
                                std::to_string(opts.resample_budget) + " resamples");
}

DecompositionResult second_stage(StageOneResult stage1,
                                 const std::vector<Segment3>& curves,
                                 const CuttingOptions& opts, Rng& rng) {
  DecompositionResult out;
  out.stage1 = std::move(stage1);

  // Refine unacceptable cells, plus any cell too crowded for the output
  // bound: sign cells can stay under the adaptive threshold while exceeding
  // a_cut * n / D^2, and every emitted cell must satisfy the latter.
  const long n_total = static_cast<long>(curves.size());
  const std::int64_t crowd_limit =
      static_cast<std::int64_t>(opts.a_cut) * static_cast<std::int64_t>(n_total);
  std::vector<int> unacceptable;
  for (std::size_t i = 0; i < out.stage1.cells.size(); ++i) {
    const auto& cell = out.stage1.cells[i];
    std::int64_t scaled =
        static_cast<std::int64_t>(cell.curves.size()) * opts.D * opts.D;
    if (!cell.acceptable || scaled > crowd_limit)
      unacceptable.push_back(static_cast<int>(i));
  }
  out.refinements.resize(unacceptable.size());
  std::vector<Rng> streams;
  streams.reserve(unacceptable.size());
  for (std::size_t i = 0; i < unacceptable.size(); ++i)
    streams.push_back(rng.split(0xce11 + i));
  parallel_for(static_cast<int>(unacceptable.size()), opts.threads, [&](int i) {
    out.refinements[static_cast<std::size_t>(i)] =
        refine_cell(out.stage1, curves, unacceptable[static_cast<std::size_t>(i)],
                    n_total, opts, streams[static_cast<std::size_t>(i)]);
  });

  // Ledgers.
  std::set<int> sampled_lines;
  for (const auto& ref : out.refinements) {
    out.sampled_arc_total += static_cast<std::int64_t>(ref.sampled.size());
    for (int si : ref.sampled) sampled_lines.insert(ref.arcs[static_cast<std::size_t>(si)].curve);
  }
  out.lines_with_sampled_arc.assign(sampled_lines.begin(), sampled_lines.end());

  out.cell_count = 0;
  for (const auto& cell : out.stage1.cells)
    if (cell.acceptable) ++out.cell_count;
  for (const auto& ref : out.refinements)
    out.cell_count += static_cast<std::int64_t>(ref.decomposition.traps.size());

  // Boundary-crossing ledger: lines off Z(P) and outside the sampled set.
  for (std::size_t ci = 0; ci < curves.size(); ++ci) {
    const CurveTrace& trace = out.stage1.trace.traces[ci];
    if (trace.in_zero_set) continue;
    if (sampled_lines.count(static_cast<int>(ci))) continue;
    out.zero_set_crossings += static_cast<std::int64_t>(trace.cuts.size());
    out.boundary_crossings += static_cast<std::int64_t>(trace.cuts.size());
  }
  for (const auto& ref : out.refinements) {
    for (const auto& arc : ref.arcs) {
      if (sampled_lines.count(arc.curve)) continue;
      // Conservative: every slab boundary and sampled-arc crossing in range.
      for (const auto& x : ref.decomposition.event_xs) {
        if (arc.vertical) continue;
        if (arc.x_lo < ExtRat(x) && ExtRat(x) < arc.x_hi) ++out.boundary_crossings;
      }
      for (int si : ref.sampled) {
        const PlanarArc& s = ref.arcs[static_cast<std::size_t>(si)];
        if (arc.vertical || s.vertical) continue;
        if (arc.b == s.b) continue;
        Rational x = (s.a - arc.a) / (arc.b - s.b);
        OpenInterval both = intersect({arc.x_lo, arc.x_hi}, {s.x_lo, s.x_hi});
        if (both.lo < ExtRat(x) && ExtRat(x) < both.hi) ++out.boundary_crossings;
      }
    }
  }
  return out;
}

CellLocation locate_point(const DecompositionResult& result, const Vec3& p) {
  CellLocation loc;
  SignKey key;
  std::span<const Rational> sp(p.data(), 3);
  for (const auto& f : result.stage1.factors) {
    int s = f.sign_at(sp);
    if (s == 0) {
      loc.kind = CellLocation::Boundary;
      return loc;
    }
    key.push_back(s);
  }
  int cell_index = -1;
  for (std::size_t i = 0; i < result.stage1.cells.size(); ++i) {
    if (result.stage1.cells[i].signs == key) {
      cell_index = static_cast<int>(i);
      break;
    }
  }
  if (cell_index < 0) {
    loc.kind = CellLocation::ImplicitEmpty;
    return loc;
  }
  loc.cell_index = cell_index;
  for (std::size_t ri = 0; ri < result.refinements.size(); ++ri) {
    if (result.refinements[ri].cell_index != cell_index) continue;
    loc.refinement = static_cast<int>(ri);
    loc.trapezoid = result.refinements[ri].decomposition.locate({p[0], p[1]});
    loc.kind = loc.trapezoid < 0 ? CellLocation::Boundary : CellLocation::SecondStage;
    return loc;
  }
  loc.kind = CellLocation::Stage1Cell;
  return loc;
}

}  // namespace polypart
