#ifndef POLYPART_DEPTH_HPP
#define POLYPART_DEPTH_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "polypart/cutting.hpp"

namespace polypart {

enum class CutKind { Type1, Type2, PrismWall, BaseCase };

struct Cut {
  AlgebraicReal t;
  CutKind kind = CutKind::BaseCase;
};

struct LineCuts {
  int curve = -1;
  std::vector<Cut> cuts;  // sorted by parameter, deduplicated
};

struct DepthGraph {
  struct PieceRef {
    int curve = -1;
    int slot = 0;  // 0 .. cuts(curve): open interval between consecutive cuts
  };
  std::vector<PieceRef> pieces;
  std::vector<std::pair<int, int>> edges;  // (below, above): below precedes above
  std::vector<int> topo_order;             // valid when acyclic
  bool acyclic = false;
};

// Cut parameters where the curve crosses Z(P). Throws LineInZeroSet when the
// restriction vanishes identically.
std::vector<Cut> type1_cuts(const Segment3& seg, const Polynomial& P);

// Cut parameters where the projected curve crosses the discriminant curve
// Res_z(P, dP/dz). Throws on z-free P (InvalidArgument), vertical input, and
// ProjectionInDiscriminant when the projection lies inside the discriminant.
std::vector<Cut> type2_cuts(const Segment3& seg, const Polynomial& P);

// Zero-set pieces of the discriminant of a factored product: per-factor
// discriminants (leading z-coefficients for z-linear factors), pairwise
// z-resultants, and z-free factors. Zero and constant parts are dropped.
std::vector<Polynomial> discriminant_parts(const std::vector<Polynomial>& factors);

struct DepthOptions {
  int D = 3;
  int n0 = 8;
  int a_cut = 4;
  int c_cell = 4;
  int c_vis = 1;
  long sample_c_num = 1;
  long sample_c_den = 1;
  int resample_budget = 16;
  int dissect_retry_budget = 64;
  int max_depth = 64;
  int threads = 1;
  bool baseline = false;  // all-pairs cuts instead of the recursion
};

struct RecursionStats {
  int nodes = 0;
  int base_cases = 0;
  int deepest = 0;
  std::int64_t cuts_type1 = 0;
  std::int64_t cuts_type2 = 0;
  std::int64_t cuts_wall = 0;
  std::int64_t cuts_base = 0;
  std::int64_t fallback_cuts = 0;  // safety-net additions; zero in normal runs
  std::int64_t total_cuts = 0;     // after deduplication
  std::int64_t edge_count = 0;
  int degenerate_discriminants = 0;
  std::vector<std::pair<int, int>> subproblems;  // (depth, size)
};

struct CycleEliminationResult {
  std::vector<LineCuts> cuts;  // one entry per input curve
  DepthGraph graph;
  RecursionStats stats;
};

// Cut pairwise-disjoint non-vertical curves into depth-order-free pieces.
// The output graph is certified acyclic by construction (topological sort).
CycleEliminationResult eliminate_cycles(const std::vector<Segment3>& curves,
                                        const DepthOptions& opts, Rng& rng);

// Explicit cycle witness (piece indices) or nullopt when acyclic.
std::optional<std::vector<int>> find_cycle(const DepthGraph& g);

}  // namespace polypart

#endif
