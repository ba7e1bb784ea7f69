#include "polypart/curve_partition.hpp"

#include <algorithm>

#include "polypart/parallel.hpp"

namespace polypart {

namespace {

// Rational witness strictly inside (lo, hi) where either end may be missing.
Rational interval_witness(const AlgebraicReal* lo, const AlgebraicReal* hi) {
  if (lo && hi) return rational_between(*lo, *hi);
  if (lo) {
    AlgebraicReal c = *lo;
    return c.upper() + 1;
  }
  if (hi) {
    AlgebraicReal c = *hi;
    return c.lower() - 1;
  }
  return Rational(0);
}

SignKey signs_at_point(const std::vector<Polynomial>& factors, const Vec3& p) {
  SignKey key;
  key.reserve(factors.size());
  std::span<const Rational> sp(p.data(), 3);
  for (const auto& f : factors) key.push_back(f.sign_at(sp));
  return key;
}

bool key_open(const SignKey& key) {
  for (int s : key)
    if (s == 0) return false;
  return true;
}

}  // namespace

CurveCells curves_in_cells(const std::vector<Polynomial>& factors,
                           const std::vector<Segment3>& curves, int threads) {
  CurveCells out;
  out.traces.resize(curves.size());
  parallel_for(static_cast<int>(curves.size()), threads, [&](int ci) {
    const Segment3& seg = curves[static_cast<std::size_t>(ci)];
    CurveTrace& trace = out.traces[static_cast<std::size_t>(ci)];
    std::vector<AlgebraicReal> cuts;
    for (const auto& f : factors) {
      UniPoly u = restrict_to_line(f, seg.line);
      if (u.is_zero()) {
        trace.in_zero_set = true;
        return;
      }
      for (auto& root : distinct_real_roots(u)) {
        if (seg.t_lo.finite() && root.compare(seg.t_lo.value()) <= 0) continue;
        if (seg.t_hi.finite() && root.compare(seg.t_hi.value()) >= 0) continue;
        cuts.push_back(std::move(root));
      }
    }
    trace.cuts = sort_unique(std::move(cuts));

    const std::size_t pieces = trace.cuts.size() + 1;
    trace.midpoints.reserve(pieces);
    trace.piece_signs.reserve(pieces);
    for (std::size_t i = 0; i < pieces; ++i) {
      AlgebraicReal lo_cut, hi_cut;
      const AlgebraicReal* lo = nullptr;
      const AlgebraicReal* hi = nullptr;
      if (i > 0) {
        lo = &trace.cuts[i - 1];
      } else if (seg.t_lo.finite()) {
        lo_cut = AlgebraicReal(seg.t_lo.value());
        lo = &lo_cut;
      }
      if (i < trace.cuts.size()) {
        hi = &trace.cuts[i];
      } else if (seg.t_hi.finite()) {
        hi_cut = AlgebraicReal(seg.t_hi.value());
        hi = &hi_cut;
      }
      Rational mid = interval_witness(lo, hi);
      SignKey key = signs_at_point(factors, seg.line.at(mid));
      POLYPART_CHECK(key_open(key), "piece witness landed on the zero set");
      trace.midpoints.push_back(std::move(mid));
      trace.piece_signs.push_back(std::move(key));
    }
  });

  for (std::size_t ci = 0; ci < curves.size(); ++ci) {
    const CurveTrace& trace = out.traces[ci];
    if (trace.in_zero_set) continue;
    for (const auto& key : trace.piece_signs) {
      auto& list = out.cell_curves[key];
      if (list.empty() || list.back() != static_cast<int>(ci))
        list.push_back(static_cast<int>(ci));
    }
  }
  return out;
}

FirstStageRound first_stage_round(const std::vector<Segment3>& curves,
                                  const std::vector<IndexedPair>& pairs,
                                  const std::vector<char>& alive, int n_total,
                                  const StageOneOptions& opts, Rng& rng) {
  POLYPART_CHECK(pairs.size() == alive.size(), "pair flags out of sync");
  FirstStageRound out;
  out.survives.assign(pairs.size(), 0);

  // Collect the weighted multiset V_prev from the live pairs.
  std::vector<Vec3> points;
  std::int64_t alive_pairs = 0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (!alive[i]) continue;
    ++alive_pairs;
    points.push_back(pairs[i].vis.p1);
    points.push_back(pairs[i].vis.p2);
  }
  out.record.weight_before = 2 * alive_pairs;
  if (alive_pairs == 0) {
    // No live pairs can reach later rounds, so this round constrains nothing.
    out.record.threshold = 0;
    return out;
  }

  PointPartitionOptions popts;
  popts.r = 8 * static_cast<std::int64_t>(opts.D) * opts.D * opts.D;
  popts.c_cell = opts.c_cell;
  popts.max_total_degree = opts.D;
  popts.dissect_retry_budget = opts.dissect_retry_budget;
  auto part = partition_points(multiset_from_points(points, 3), 3, popts, rng);
  out.poly = part.poly;
  out.record.retries = part.retries;
  out.record.factors_added = static_cast<int>(part.poly.factors.size());
  out.record.degree_added = part.poly.degree();

  // Pair locations in this round's cells; zero signs split the pair.
  std::vector<SignKey> pair_cell(pairs.size());
  std::map<SignKey, std::int64_t> cell_pairs;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (!alive[i]) continue;
    SignKey k1 = signs_at_point(part.poly.factors, pairs[i].vis.p1);
    if (!key_open(k1)) continue;
    SignKey k2 = signs_at_point(part.poly.factors, pairs[i].vis.p2);
    if (k1 != k2) continue;
    pair_cell[i] = k1;
    cell_pairs[k1] += 1;
  }

  // Incidence counts for this round's cells over the active curves.
  CurveCells cc = curves_in_cells(part.poly.factors, curves, opts.threads);
  std::map<SignKey, std::int64_t> cell_count;
  for (const auto& [key, list] : cc.cell_curves)
    cell_count[key] = static_cast<std::int64_t>(list.size());

  // Greedy marking: descending curve count, while the marked cells hold at
  // most half the live pair weight and the count clears the 2n/D^2 floor.
  std::vector<std::pair<SignKey, std::int64_t>> order(cell_count.begin(), cell_count.end());
  std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  const std::int64_t floor_threshold =
      (2 * static_cast<std::int64_t>(n_total)) / (static_cast<std::int64_t>(opts.D) * opts.D);
  std::int64_t marked_pairs = 0;
  std::map<SignKey, bool> marked;
  std::int64_t max_unmarked = 0;
  out.record.cells_seen = static_cast<int>(order.size());
  bool stopped = false;
  for (const auto& [key, count] : order) {
    std::int64_t here = 0;
    auto it = cell_pairs.find(key);
    if (it != cell_pairs.end()) here = it->second;
    bool can_mark = !stopped &&
                    count * opts.D * opts.D > 2 * static_cast<std::int64_t>(n_total) &&
                    2 * (marked_pairs + here) <= alive_pairs;
    if (can_mark) {
      marked[key] = true;
      marked_pairs += here;
      ++out.record.cells_marked;
    } else {
      stopped = true;  // prefix marking keeps the threshold certificate simple
      max_unmarked = std::max(max_unmarked, count);
    }
  }
  out.record.threshold = std::max(floor_threshold, max_unmarked);

  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (!alive[i] || pair_cell[i].empty()) continue;
    if (marked.count(pair_cell[i])) out.survives[i] = 1;
  }
  std::int64_t surviving = 0;
  for (char s : out.survives) surviving += s;
  out.record.weight_after = 2 * surviving;
  POLYPART_CHECK(2 * out.record.weight_after <= out.record.weight_before,
                 "marked cells exceeded half the pair weight");
  return out;
}

StageOneResult first_stage(const std::vector<Segment3>& curves,
                           const StageOneOptions& opts, Rng& rng) {
  if (opts.D < 1) throw InvalidArgument("first_stage requires D >= 1");
  StageOneResult out;
  out.D = opts.D;
  out.n_input = static_cast<long>(curves.size());

  std::vector<Segment3> vertical, nonvertical;
  std::vector<int> nonvertical_index;  // into `curves`
  std::vector<int> vertical_index;
  for (std::size_t i = 0; i < curves.size(); ++i) {
    if (curves[i].line.has_zero_direction())
      throw ZeroDirection("curve " + std::to_string(curves[i].line.id));
    if (curves[i].line.is_vertical()) {
      vertical.push_back(curves[i]);
      vertical_index.push_back(static_cast<int>(i));
    } else {
      nonvertical.push_back(curves[i]);
      nonvertical_index.push_back(static_cast<int>(i));
    }
  }

  // All visibility pairs among non-vertical curves; Degenerate propagates.
  out.pairs = all_visibility_pairs(nonvertical, opts.threads);
  for (auto& p : out.pairs) {  // reindex to the full curve list
    p.i = nonvertical_index[static_cast<std::size_t>(p.i)];
    p.j = nonvertical_index[static_cast<std::size_t>(p.j)];
  }
  out.pair_survived.assign(out.pairs.size(), 1);
  out.v0_weight = 2 * static_cast<std::int64_t>(out.pairs.size());

  int k = 0;
  {
    int target = 1;
    while (target < opts.D) {
      target *= 2;
      ++k;
    }
    k *= 4;  // 4 * ceil(log2 D)
  }
  out.rounds = k;

  const std::int64_t n_total = static_cast<std::int64_t>(curves.size());
  std::int64_t final_threshold =
      (2 * n_total) / (static_cast<std::int64_t>(opts.D) * opts.D);

  // Disregarded curves accumulate here and leave the active set.
  std::vector<char> disregarded(curves.size(), 0);
  std::vector<Polynomial> round_factors;
  std::vector<int> round_of_factor;

  for (int round = 0; round < k; ++round) {
    std::vector<Segment3> active;
    for (std::size_t i = 0; i < nonvertical.size(); ++i) {
      if (!disregarded[static_cast<std::size_t>(nonvertical_index[i])])
        active.push_back(nonvertical[i]);
    }
    Rng round_rng = rng.split(static_cast<std::uint64_t>(round) + 1);
    FirstStageRound fr = first_stage_round(active, out.pairs, out.pair_survived,
                                           static_cast<int>(n_total), opts, round_rng);
    fr.record.round = round;
    POLYPART_CHECK(fr.record.degree_added <= opts.D, "round degree exceeded D");

    // Disregard curves that fell inside this round's zero set; pairs touching
    // them sit on Z(F) and leave with them.
    if (!fr.poly.factors.empty()) {
      CurveCells probe = curves_in_cells(fr.poly.factors, nonvertical, opts.threads);
      for (std::size_t i = 0; i < nonvertical.size(); ++i) {
        if (probe.traces[i].in_zero_set)
          disregarded[static_cast<std::size_t>(nonvertical_index[i])] = 1;
      }
      for (std::size_t i = 0; i < out.pairs.size(); ++i) {
        if (disregarded[static_cast<std::size_t>(out.pairs[i].i)] ||
            disregarded[static_cast<std::size_t>(out.pairs[i].j)])
          fr.survives[i] = 0;
      }
      std::int64_t surviving = 0;
      for (char s : fr.survives) surviving += s;
      fr.record.weight_after = 2 * surviving;
    }

    for (const auto& f : fr.poly.factors) {
      round_factors.push_back(f);
      round_of_factor.push_back(round);
    }
    out.pair_survived = fr.survives;
    final_threshold = std::max(final_threshold, fr.record.threshold);
    out.history.push_back(fr.record);
  }

  // Vertical lines: planar partition of their piercing points, lifted z-free.
  if (!vertical.empty()) {
    std::vector<Vec3> pierce;
    for (const auto& seg : vertical)
      pierce.push_back({seg.line.origin[0], seg.line.origin[1], Rational(0)});
    PointPartitionOptions popts;
    popts.r = 8 * static_cast<std::int64_t>(opts.D) * opts.D;
    popts.c_cell = opts.c_cell;
    popts.max_total_degree = opts.D;
    popts.dissect_retry_budget = opts.dissect_retry_budget;
    Rng vr = rng.split(0x7e57);
    auto vpart = partition_points(multiset_from_points(pierce, 2), 2, popts, vr);
    for (const auto& f : vpart.poly.factors) {
      std::vector<std::pair<Exponents, Rational>> ts;
      for (const auto& [e, c] : f.terms()) ts.emplace_back(e, c);
      out.factors.push_back(Polynomial::from_terms(3, ts));
      out.factor_round.push_back(-1);
    }
    out.vertical_factor_count = static_cast<int>(out.factors.size());
  }
  for (std::size_t i = 0; i < round_factors.size(); ++i) {
    out.factors.push_back(round_factors[i]);
    out.factor_round.push_back(round_of_factor[i]);
  }

  // Final cells over the full factor list.
  out.trace = curves_in_cells(out.factors, curves, opts.threads);
  std::map<SignKey, StageCell> cells;
  for (const auto& [key, list] : out.trace.cell_curves) {
    StageCell cell;
    cell.signs = key;
    cell.curves = list;
    for (int ci : list) {
      if (curves[static_cast<std::size_t>(ci)].line.is_vertical()) ++cell.vertical_count;
    }
    cells.emplace(key, std::move(cell));
  }
  for (std::size_t ci = 0; ci < curves.size(); ++ci) {
    if (out.trace.traces[ci].in_zero_set)
      out.curves_in_boundary.push_back(static_cast<int>(ci));
  }

  // Unsplit pair weight per final cell, recounted over every pair.
  std::vector<Vec3> survivor_points;
  for (std::size_t i = 0; i < out.pairs.size(); ++i) {
    const auto& pr = out.pairs[i];
    SignKey k1 = signs_at_point(out.factors, pr.vis.p1);
    SignKey k2;
    bool unsplit = key_open(k1);
    if (unsplit) {
      k2 = signs_at_point(out.factors, pr.vis.p2);
      unsplit = key_open(k2) && k1 == k2;
    }
    if (unsplit) {
      auto it = cells.find(k1);
      if (it != cells.end()) {
        it->second.unsplit_weight += 2;
      } else {
        StageCell cell;
        cell.signs = k1;
        cell.unsplit_weight = 2;
        cells.emplace(k1, std::move(cell));
      }
    }
    if (out.pair_survived[i]) {
      survivor_points.push_back(pr.vis.p1);
      survivor_points.push_back(pr.vis.p2);
    }
  }
  out.v_final = multiset_from_points(survivor_points, 3);
  for (const auto& wp : out.v_final) out.v_final_weight += wp.weight;

  // Labels plus the property-(C) certificate.
  out.threshold = final_threshold;
  const std::int64_t n2 = n_total * n_total;
  const std::int64_t d4 = static_cast<std::int64_t>(opts.D) * opts.D * opts.D * opts.D;
  for (auto& [key, cell] : cells) {
    std::int64_t nonvertical_count =
        static_cast<std::int64_t>(cell.curves.size()) - cell.vertical_count;
    cell.acceptable = nonvertical_count <= final_threshold;
    if (!cell.acceptable) {
      POLYPART_CHECK(cell.unsplit_weight * d4 <= opts.c_vis * n2,
                     "unacceptable cell exceeds its visibility budget");
    }
    out.cells.push_back(cell);
  }
  return out;
}

}  // namespace polypart
