#ifndef POLYPART_CURVE_PARTITION_HPP
#define POLYPART_CURVE_PARTITION_HPP

#include <cstdint>
#include <map>
#include <vector>

#include "polypart/algebraic.hpp"
#include "polypart/geometry.hpp"
#include "polypart/point_partition.hpp"

namespace polypart {

using SignKey = std::vector<int>;

struct StageOneOptions {
  int D = 3;
  int c_cell = 4;  // forwarded to the point partitioner
  int c_vis = 1;   // unacceptable cells carry <= c_vis * n^2 / D^4 unsplit weight
  int dissect_retry_budget = 64;
  int threads = 1;
};

// Per-curve decomposition against a factor list: cut parameters, one rational
// witness per open piece, and the sign vector there.
struct CurveTrace {
  std::vector<AlgebraicReal> cuts;       // sorted, inside the segment interval
  std::vector<Rational> midpoints;       // one per piece (cuts.size() + 1)
  std::vector<SignKey> piece_signs;      // parallel to midpoints, no zero entries
  bool in_zero_set = false;              // some factor vanishes along the curve
};

struct CurveCells {
  std::vector<CurveTrace> traces;                 // one per input curve
  std::map<SignKey, std::vector<int>> cell_curves;  // sign key -> curve indices
};

// Cut each curve at the real roots of the factor restrictions and assign its
// open pieces to sign cells. Curves inside the zero set are flagged and left
// out of the cell map.
CurveCells curves_in_cells(const std::vector<Polynomial>& factors,
                           const std::vector<Segment3>& curves, int threads = 1);

struct RoundRecord {
  int round = 0;
  int factors_added = 0;
  int degree_added = 0;
  std::int64_t weight_before = 0;
  std::int64_t weight_after = 0;
  std::int64_t threshold = 0;
  int cells_seen = 0;
  int cells_marked = 0;
  int retries = 0;
};

// One application of the point partitioner to the surviving visibility pairs,
// with greedy cell marking. `alive` flags the pairs forming V_prev; the round
// never marks more than half their weight.
struct FirstStageRound {
  PartitionPoly poly;
  std::vector<char> survives;  // per pair: unsplit inside a marked cell
  RoundRecord record;
};

FirstStageRound first_stage_round(const std::vector<Segment3>& curves,
                                  const std::vector<IndexedPair>& pairs,
                                  const std::vector<char>& alive, int n_total,
                                  const StageOneOptions& opts, Rng& rng);

struct StageCell {
  SignKey signs;
  std::vector<int> curves;     // indices of curves meeting the cell
  int vertical_count = 0;
  std::int64_t unsplit_weight = 0;  // 2 * (pairs with both points inside)
  bool acceptable = true;
};

struct StageOneResult {
  std::vector<Polynomial> factors;  // vertical (z-free) factors first
  int vertical_factor_count = 0;
  std::vector<int> factor_round;    // -1 for vertical factors, else round id
  int D = 1;
  int rounds = 0;
  long n_input = 0;
  std::int64_t threshold = 0;       // final acceptability threshold
  std::int64_t v0_weight = 0;
  std::int64_t v_final_weight = 0;
  std::vector<StageCell> cells;
  std::vector<int> curves_in_boundary;   // routed out: inside Z(P)
  std::vector<WeightedPoint> v_final;
  std::vector<RoundRecord> history;
  CurveCells trace;                  // per-curve pieces over the full factor list
  std::vector<IndexedPair> pairs;    // all visibility pairs among non-verticals
  std::vector<char> pair_survived;   // pairs forming V_k

  int degree() const {
    int d = 0;
    for (const auto& f : factors) d += f.degree();
    return d;
  }
};

// Full first-stage decomposition: 4 * ceil(log2 D) rounds over the
// non-vertical curves plus a planar partition for vertical lines.
StageOneResult first_stage(const std::vector<Segment3>& curves,
                           const StageOneOptions& opts, Rng& rng);

}  // namespace polypart

#endif
