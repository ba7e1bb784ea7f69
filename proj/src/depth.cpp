#include "polypart/depth.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace polypart {

namespace {

std::vector<Cut> cuts_from_roots(const Segment3& seg, const UniPoly& u, CutKind kind) {
  std::vector<Cut> out;
  for (auto& root : distinct_real_roots(u)) {
    if (seg.t_lo.finite() && root.compare(seg.t_lo.value()) <= 0) continue;
    if (seg.t_hi.finite() && root.compare(seg.t_hi.value()) >= 0) continue;
    out.push_back({std::move(root), kind});
  }
  return out;
}

}  // namespace

std::vector<Cut> type1_cuts(const Segment3& seg, const Polynomial& P) {
  UniPoly u = restrict_to_line(P, seg.line);
  if (u.is_zero())
    throw LineInZeroSet("curve " + std::to_string(seg.line.id) + " lies in Z(P)");
  return cuts_from_roots(seg, u, CutKind::Type1);
}

std::vector<Cut> type2_cuts(const Segment3& seg, const Polynomial& P) {
  if (P.degree_in(2) < 1)
    throw InvalidArgument("type2_cuts needs positive degree in z");
  if (seg.line.is_vertical()) throw VerticalInput("type2_cuts needs a non-vertical curve");
  Polynomial disc = resultant_z(P, P.partial(2));
  POLYPART_CHECK(!disc.is_zero(), "discriminant of a squarefree product vanished");
  UniPoly u = restrict_planar(disc, {seg.line.origin[0], seg.line.origin[1]},
                              {seg.line.direction[0], seg.line.direction[1]});
  if (u.is_zero())
    throw ProjectionInDiscriminant("projection of curve " +
                                   std::to_string(seg.line.id) +
                                   " lies inside the discriminant curve");
  return cuts_from_roots(seg, u, CutKind::Type2);
}

std::vector<Polynomial> discriminant_parts(const std::vector<Polynomial>& factors) {
  std::vector<Polynomial> unique;
  for (const auto& f : factors) {
    bool seen = false;
    for (const auto& g : unique) seen = seen || f == g;
    if (!seen) unique.push_back(f);
  }
  std::vector<Polynomial> parts;
  auto push = [&parts](Polynomial p) {
    if (p.is_zero() || p.degree() == 0) return;  // constants carry no locus
    parts.push_back(p.primitive_part());
  };
  auto planar = [](const Polynomial& p) {
    std::vector<std::pair<Exponents, Rational>> ts;
    for (const auto& [e, c] : p.terms()) {
      POLYPART_CHECK(e[2] == 0, "z-free conversion saw a z term");
      ts.emplace_back(e, c);
    }
    return Polynomial::from_terms(2, ts);
  };
  for (std::size_t i = 0; i < unique.size(); ++i) {
    const Polynomial& f = unique[i];
    int mz = f.degree_in(2);
    if (mz == 0) {
      push(planar(f));
    } else if (mz == 1) {
      push(planar(f.coefficient_of(2, 1)));  // escape locus of the single root
    } else {
      push(resultant_z(f, f.partial(2)));
    }
    for (std::size_t j = i + 1; j < unique.size(); ++j) {
      const Polynomial& g = unique[j];
      if (mz < 1 || g.degree_in(2) < 1) continue;
      push(resultant_z(f, g));
    }
  }
  return parts;
}

namespace {

struct CrossingInfo {
  Rational t_i, t_j;  // parameters on curve i and j
  int below;          // which endpoint is lower: 0 -> i below j, 1 -> j below i
};

// All projection crossings with exact height order; throws NonDisjointInput
// on equal heights.
std::map<std::pair<int, int>, CrossingInfo> crossing_table(
    const std::vector<Segment3>& curves, int threads) {
  auto pairs = all_visibility_pairs(curves, threads);
  std::map<std::pair<int, int>, CrossingInfo> table;
  for (const auto& p : pairs) {
    const Rational& zi = p.vis.p1[2];
    const Rational& zj = p.vis.p2[2];
    if (zi == zj)
      throw NonDisjointInput("curves " + std::to_string(curves[p.i].line.id) + " and " +
                             std::to_string(curves[p.j].line.id) + " meet");
    table[{p.i, p.j}] = {p.vis.t1, p.vis.t2, zi < zj ? 0 : 1};
  }
  return table;
}

class Eliminator {
 public:
  Eliminator(const std::vector<Segment3>& curves, const DepthOptions& opts, Rng& rng)
      : curves_(curves), opts_(opts), rng_(rng), cut_sets_(curves.size()) {
    crossings_ = crossing_table(curves, opts.threads);
  }

  CycleEliminationResult run() {
    CycleEliminationResult out;
    if (opts_.baseline) {
      std::vector<int> all(curves_.size());
      for (std::size_t i = 0; i < curves_.size(); ++i) all[i] = static_cast<int>(i);
      base_case(all);
    } else {
      std::vector<int> all(curves_.size());
      for (std::size_t i = 0; i < curves_.size(); ++i) all[i] = static_cast<int>(i);
      recurse(all, 0);
    }
    build_graph(out);
    enforce_acyclic(out);
    finalize(out);
    return out;
  }

 private:
  void add_cut(int curve, AlgebraicReal t, CutKind kind) {
    switch (kind) {
      case CutKind::Type1: ++stats_.cuts_type1; break;
      case CutKind::Type2: ++stats_.cuts_type2; break;
      case CutKind::PrismWall: ++stats_.cuts_wall; break;
      case CutKind::BaseCase: ++stats_.cuts_base; break;
    }
    cut_sets_[static_cast<std::size_t>(curve)].push_back({std::move(t), kind});
  }

  void cut_crossing_pair(int i, int j) {
    auto key = std::make_pair(std::min(i, j), std::max(i, j));
    auto it = crossings_.find(key);
    if (it == crossings_.end()) return;
    add_cut(key.first, AlgebraicReal(it->second.t_i), CutKind::BaseCase);
    add_cut(key.second, AlgebraicReal(it->second.t_j), CutKind::BaseCase);
  }

  void base_case(const std::vector<int>& ids) {
    ++stats_.base_cases;
    for (std::size_t a = 0; a < ids.size(); ++a)
      for (std::size_t b = a + 1; b < ids.size(); ++b) cut_crossing_pair(ids[a], ids[b]);
  }

  void recurse(const std::vector<int>& node_ids, int depth) {
    stats_.subproblems.emplace_back(depth, static_cast<int>(node_ids.size()));
    stats_.deepest = std::max(stats_.deepest, depth);

    // Only lines still sitting on a depth cycle need any cutting at all.
    std::set<int> core = lines_on_cycles(node_ids);
    if (core.empty()) return;
    std::vector<int> ids(core.begin(), core.end());

    if (static_cast<int>(ids.size()) <= opts_.n0 || depth >= opts_.max_depth) {
      base_case(ids);
      return;
    }
    ++stats_.nodes;

    std::vector<Segment3> subset;
    subset.reserve(ids.size());
    for (int id : ids) subset.push_back(curves_[static_cast<std::size_t>(id)]);

    StageOneOptions sopts;
    sopts.D = opts_.D;
    sopts.c_cell = opts_.c_cell;
    sopts.c_vis = opts_.c_vis;
    sopts.dissect_retry_budget = opts_.dissect_retry_budget;
    sopts.threads = opts_.threads;
    Rng stage_rng = rng_.split(0x5eed0000 + static_cast<std::uint64_t>(stats_.nodes));
    StageOneResult stage1 = first_stage(subset, sopts, stage_rng);

    CuttingOptions copts;
    copts.D = opts_.D;
    copts.sample_c_num = opts_.sample_c_num;
    copts.sample_c_den = opts_.sample_c_den;
    copts.a_cut = opts_.a_cut;
    copts.resample_budget = opts_.resample_budget;
    copts.threads = opts_.threads;
    Rng cut_rng = rng_.split(0xc077 + static_cast<std::uint64_t>(stats_.nodes));
    DecompositionResult full = second_stage(std::move(stage1), subset, copts, cut_rng);
    const StageOneResult& s1 = full.stage1;

    // Discriminant pieces once per node; restrictions per line.
    std::vector<Polynomial> parts = discriminant_parts(s1.factors);

    std::set<int> special;  // subset indices needing all-pairs treatment
    for (int ci : s1.curves_in_boundary) special.insert(ci);

    for (std::size_t si = 0; si < subset.size(); ++si) {
      if (special.count(static_cast<int>(si))) continue;
      const Segment3& seg = subset[si];
      int global = ids[si];
      // First-type cuts: the stage-one trace already isolated the roots.
      for (const auto& root : s1.trace.traces[si].cuts)
        add_cut(global, root, CutKind::Type1);
      // Second-type cuts against every discriminant piece.
      for (const auto& part : parts) {
        UniPoly u = restrict_planar(part, {seg.line.origin[0], seg.line.origin[1]},
                                    {seg.line.direction[0], seg.line.direction[1]});
        if (u.is_zero()) {
          special.insert(static_cast<int>(si));
          ++stats_.degenerate_discriminants;
          break;
        }
        for (auto& cut : cuts_from_roots(seg, u, CutKind::Type2))
          add_cut(global, std::move(cut.t), CutKind::Type2);
      }
    }

    // Prism-wall cuts from every refined cell the piece passes through.
    for (const auto& ref : full.refinements) {
      for (const auto& arc : ref.arcs) {
        int si = arc.curve;
        if (special.count(si)) continue;
        int global = ids[static_cast<std::size_t>(si)];
        const Line3& line = subset[static_cast<std::size_t>(si)].line;
        const Rational& dx = line.direction[0];
        const Rational& dy = line.direction[1];
        if (!arc.vertical) {
          for (const auto& x : ref.decomposition.event_xs) {
            if (!(arc.x_lo < ExtRat(x) && ExtRat(x) < arc.x_hi)) continue;
            add_cut(global, AlgebraicReal((x - line.origin[0]) / dx), CutKind::PrismWall);
          }
        }
        for (int sidx : ref.sampled) {
          const PlanarArc& s = ref.arcs[static_cast<std::size_t>(sidx)];
          if (s.curve == si) continue;
          if (!arc.vertical && !s.vertical) {
            if (arc.b == s.b) continue;
            Rational x = (s.a - arc.a) / (arc.b - s.b);
            if (!(arc.x_lo < ExtRat(x) && ExtRat(x) < arc.x_hi)) continue;
            if (!(s.x_lo < ExtRat(x) && ExtRat(x) < s.x_hi)) continue;
            add_cut(global, AlgebraicReal((x - line.origin[0]) / dx), CutKind::PrismWall);
          } else if (arc.vertical && !s.vertical) {
            Rational y = s.y_at(arc.x_at);
            if (!(arc.y_lo < ExtRat(y) && ExtRat(y) < arc.y_hi)) continue;
            if (!(s.x_lo < ExtRat(arc.x_at) && ExtRat(arc.x_at) < s.x_hi)) continue;
            add_cut(global, AlgebraicReal((y - line.origin[1]) / dy), CutKind::PrismWall);
          }
        }
      }
    }

    // Special curves: all-pairs cuts against the whole node.
    for (int si : special) {
      for (std::size_t sj = 0; sj < subset.size(); ++sj) {
        if (static_cast<int>(sj) == si) continue;
        cut_crossing_pair(ids[static_cast<std::size_t>(si)], ids[sj]);
      }
    }

    // The cuts above confine any remaining cycle to a single cell, so only
    // lines still sitting on cycles need recursive treatment.
    std::set<int> cyclic = lines_on_cycles(ids);
    if (cyclic.empty()) return;

    std::set<int> refined_cells;
    for (const auto& ref : full.refinements) refined_cells.insert(ref.cell_index);

    std::set<std::vector<int>> seen;
    auto child = [&](const std::vector<int>& subset_ids) {
      std::vector<int> g;
      for (int si : subset_ids) {
        int gi = ids[static_cast<std::size_t>(si)];
        if (cyclic.count(gi)) g.push_back(gi);
      }
      if (g.size() < 3) return;  // depth cycles need at least three lines
      std::sort(g.begin(), g.end());
      if (!seen.insert(g).second) return;
      if (!visited_.insert(g).second) return;
      if (g.size() == ids.size()) {
        base_case(g);  // no contraction: fall back rather than loop
        return;
      }
      recurse(g, depth + 1);
    };
    for (std::size_t cix = 0; cix < s1.cells.size(); ++cix) {
      if (!refined_cells.count(static_cast<int>(cix))) child(s1.cells[cix].curves);
    }
    for (const auto& ref : full.refinements) {
      for (const auto& ids_in_trap : ref.trap_curves) child(ids_in_trap);
    }
  }

  // Curves among `ids` whose pieces (under the cuts so far) lie on a cycle.
  std::set<int> lines_on_cycles(const std::vector<int>& ids) {
    std::map<int, std::vector<AlgebraicReal>> cuts;
    for (int id : ids) {
      std::vector<AlgebraicReal> ts;
      for (const auto& c : cut_sets_[static_cast<std::size_t>(id)]) ts.push_back(c.t);
      cuts.emplace(id, sort_unique(std::move(ts)));
    }
    auto piece_slot = [&](int id, const Rational& t) -> int {
      const auto& cs = cuts[id];
      int lo = 0, hi = static_cast<int>(cs.size());
      while (lo < hi) {
        int mid = (lo + hi) / 2;
        int cmp = cs[static_cast<std::size_t>(mid)].compare(t);
        if (cmp == 0) return -1;
        if (cmp < 0)
          lo = mid + 1;
        else
          hi = mid;
      }
      return lo;
    };
    // Node-local piece graph.
    std::map<std::pair<int, int>, int> piece_id;
    std::vector<std::pair<int, int>> piece_curve;
    auto intern = [&](int id, int slot) {
      auto key = std::make_pair(id, slot);
      auto it = piece_id.find(key);
      if (it != piece_id.end()) return it->second;
      int v = static_cast<int>(piece_curve.size());
      piece_id.emplace(key, v);
      piece_curve.push_back(key);
      return v;
    };
    std::vector<std::pair<int, int>> edges;
    for (std::size_t a = 0; a < ids.size(); ++a) {
      for (std::size_t b = a + 1; b < ids.size(); ++b) {
        auto key = std::make_pair(std::min(ids[a], ids[b]), std::max(ids[a], ids[b]));
        auto it = crossings_.find(key);
        if (it == crossings_.end()) continue;
        int pi = piece_slot(key.first, it->second.t_i);
        int pj = piece_slot(key.second, it->second.t_j);
        if (pi < 0 || pj < 0) continue;
        int u = intern(key.first, pi);
        int v = intern(key.second, pj);
        if (it->second.below == 0)
          edges.emplace_back(u, v);
        else
          edges.emplace_back(v, u);
      }
    }
    // Peel sources and sinks; whatever survives sits on a cycle.
    std::vector<int> indeg(piece_curve.size(), 0), outdeg(piece_curve.size(), 0);
    std::vector<char> dead(piece_curve.size(), 0);
    for (auto& [u, v] : edges) {
      ++outdeg[static_cast<std::size_t>(u)];
      ++indeg[static_cast<std::size_t>(v)];
    }
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t v = 0; v < piece_curve.size(); ++v) {
        if (dead[v] || (indeg[v] > 0 && outdeg[v] > 0)) continue;
        dead[v] = 1;
        changed = true;
        for (auto& [a2, b2] : edges) {
          if (static_cast<std::size_t>(a2) == v && !dead[static_cast<std::size_t>(b2)])
            --indeg[static_cast<std::size_t>(b2)];
          if (static_cast<std::size_t>(b2) == v && !dead[static_cast<std::size_t>(a2)])
            --outdeg[static_cast<std::size_t>(a2)];
        }
      }
    }
    std::set<int> out;
    for (std::size_t v = 0; v < piece_curve.size(); ++v) {
      if (!dead[v]) out.insert(piece_curve[v].first);
    }
    return out;
  }

  void build_graph(CycleEliminationResult& out) {
    out.cuts.clear();
    out.cuts.resize(curves_.size());
    piece_base_.assign(curves_.size() + 1, 0);
    for (std::size_t ci = 0; ci < curves_.size(); ++ci) {
      out.cuts[ci].curve = static_cast<int>(ci);
      std::vector<AlgebraicReal> ts;
      ts.reserve(cut_sets_[ci].size());
      for (const auto& c : cut_sets_[ci]) ts.push_back(c.t);
      std::vector<AlgebraicReal> sorted = sort_unique(std::move(ts));
      out.cuts[ci].cuts.clear();
      for (auto& t : sorted) {
        CutKind kind = CutKind::BaseCase;
        for (const auto& c : cut_sets_[ci]) {
          if (c.t.compare(t) == 0) {
            kind = c.kind;
            break;
          }
        }
        out.cuts[ci].cuts.push_back({std::move(t), kind});
      }
      piece_base_[ci + 1] = piece_base_[ci] + static_cast<int>(out.cuts[ci].cuts.size()) + 1;
    }

    DepthGraph& g = out.graph;
    g.pieces.clear();
    g.edges.clear();
    for (std::size_t ci = 0; ci < curves_.size(); ++ci) {
      const int slots = static_cast<int>(out.cuts[ci].cuts.size()) + 1;
      for (int s = 0; s < slots; ++s) g.pieces.push_back({static_cast<int>(ci), s});
    }
    for (const auto& [key, info] : crossings_) {
      int pi = piece_of(out, key.first, info.t_i);
      int pj = piece_of(out, key.second, info.t_j);
      if (pi < 0 || pj < 0) continue;  // crossing sits on a cut: no edge
      if (info.below == 0) {
        g.edges.emplace_back(pi, pj);
      } else {
        g.edges.emplace_back(pj, pi);
      }
    }
  }

  // Piece index of parameter t on curve ci, or -1 when t hits a cut exactly.
  int piece_of(const CycleEliminationResult& out, int ci, const Rational& t) {
    const auto& cuts = out.cuts[static_cast<std::size_t>(ci)].cuts;
    int lo = 0, hi = static_cast<int>(cuts.size());
    while (lo < hi) {
      int mid = (lo + hi) / 2;
      int cmp = cuts[static_cast<std::size_t>(mid)].t.compare(t);
      if (cmp == 0) return -1;
      if (cmp < 0)
        lo = mid + 1;
      else
        hi = mid;
    }
    return piece_base_[static_cast<std::size_t>(ci)] + lo;
  }

  void enforce_acyclic(CycleEliminationResult& out) {
    const int max_passes = static_cast<int>(curves_.size()) + 8;
    for (int pass = 0; pass < max_passes; ++pass) {
      auto cycle = find_cycle(out.graph);
      if (!cycle) return;
      std::set<int> cycle_curves;
      for (int piece : *cycle)
        cycle_curves.insert(out.graph.pieces[static_cast<std::size_t>(piece)].curve);
      std::int64_t before = stats_.cuts_base;
      std::vector<int> ids(cycle_curves.begin(), cycle_curves.end());
      base_case(ids);
      stats_.fallback_cuts += stats_.cuts_base - before;
      build_graph(out);
    }
    POLYPART_CHECK(!find_cycle(out.graph), "safety net failed to break all cycles");
  }

  void finalize(CycleEliminationResult& out) {
    // Kahn topological order certifies acyclicity.
    DepthGraph& g = out.graph;
    std::vector<int> indeg(g.pieces.size(), 0);
    std::vector<std::vector<int>> adj(g.pieces.size());
    for (const auto& [from, to] : g.edges) {
      adj[static_cast<std::size_t>(from)].push_back(to);
      ++indeg[static_cast<std::size_t>(to)];
    }
    std::vector<int> queue;
    for (std::size_t i = 0; i < g.pieces.size(); ++i)
      if (indeg[i] == 0) queue.push_back(static_cast<int>(i));
    g.topo_order.clear();
    for (std::size_t head = 0; head < queue.size(); ++head) {
      int v = queue[head];
      g.topo_order.push_back(v);
      for (int w : adj[static_cast<std::size_t>(v)]) {
        if (--indeg[static_cast<std::size_t>(w)] == 0) queue.push_back(w);
      }
    }
    g.acyclic = g.topo_order.size() == g.pieces.size();
    POLYPART_CHECK(g.acyclic, "topological sort must succeed after enforcement");

    stats_.edge_count = static_cast<std::int64_t>(g.edges.size());
    stats_.total_cuts = 0;
    for (const auto& lc : out.cuts)
      stats_.total_cuts += static_cast<std::int64_t>(lc.cuts.size());
    out.stats = stats_;
  }

  const std::vector<Segment3>& curves_;
  const DepthOptions& opts_;
  Rng& rng_;
  std::vector<std::vector<Cut>> cut_sets_;
  std::map<std::pair<int, int>, CrossingInfo> crossings_;
  std::set<std::vector<int>> visited_;
  std::vector<int> piece_base_;
  RecursionStats stats_;
};

}  // namespace

CycleEliminationResult eliminate_cycles(const std::vector<Segment3>& curves,
                                        const DepthOptions& opts, Rng& rng) {
  for (const auto& seg : curves) {
    if (seg.line.has_zero_direction()) throw ZeroDirection("curve with zero direction");
    if (seg.line.is_vertical())
      throw VerticalInput("eliminate_cycles requires non-vertical curves");
  }
  Eliminator e(curves, opts, rng);
  return e.run();
}

std::optional<std::vector<int>> find_cycle(const DepthGraph& g) {
  enum { White, Grey, Black };
  std::vector<int> color(g.pieces.size(), White);
  std::vector<std::vector<int>> adj(g.pieces.size());
  for (const auto& [from, to] : g.edges) adj[static_cast<std::size_t>(from)].push_back(to);
  std::vector<int> stack, path;
  for (std::size_t start = 0; start < g.pieces.size(); ++start) {
    if (color[start] != White) continue;
    // Iterative DFS keeping the grey path.
    std::vector<std::pair<int, std::size_t>> frames{{static_cast<int>(start), 0}};
    while (!frames.empty()) {
      auto& [v, next] = frames.back();
      if (next == 0) {
        color[static_cast<std::size_t>(v)] = Grey;
        path.push_back(v);
      }
      if (next < adj[static_cast<std::size_t>(v)].size()) {
        int w = adj[static_cast<std::size_t>(v)][next++];
        if (color[static_cast<std::size_t>(w)] == Grey) {
          // Cycle: slice the grey path from w.
          std::vector<int> cycle;
          auto it = std::find(path.begin(), path.end(), w);
          for (; it != path.end(); ++it) cycle.push_back(*it);
          return cycle;
        }
        if (color[static_cast<std::size_t>(w)] == White) frames.emplace_back(w, 0);
      } else {
        color[static_cast<std::size_t>(v)] = Black;
        path.pop_back();
        frames.pop_back();
      }
    }
  }
  return std::nullopt;
}

}  // namespace polypart
