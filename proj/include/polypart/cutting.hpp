#ifndef POLYPART_CUTTING_HPP
#define POLYPART_CUTTING_HPP

#include <cstdint>
#include <vector>

#include "polypart/curve_partition.hpp"

namespace polypart {

// Planar arc of a projected line piece: y = a + b*x over an open x-interval,
// or a vertical wall segment at x_at with an open y-interval.
struct PlanarArc {
  Rational a, b;
  ExtRat x_lo = ExtRat::neg_inf();
  ExtRat x_hi = ExtRat::pos_inf();
  bool vertical = false;
  Rational x_at;
  ExtRat y_lo = ExtRat::neg_inf();  // vertical arcs only
  ExtRat y_hi = ExtRat::pos_inf();
  int curve = -1;  // source curve index
  int piece = -1;

  Rational y_at(const Rational& x) const { return a + b * x; }
};

struct Trapezoid {
  ExtRat x_lo = ExtRat::neg_inf();
  ExtRat x_hi = ExtRat::pos_inf();
  int floor = -1;    // index into the decomposition's arc list; -1 = -infinity
  int ceiling = -1;  // -1 = +infinity
};

struct TrapezoidalDecomposition {
  std::vector<PlanarArc> arcs;     // the non-vertical arcs walls came from
  std::vector<Rational> wall_xs;   // full vertical walls (degenerate arcs)
  std::vector<Rational> event_xs;  // sorted slab boundaries
  std::vector<Trapezoid> traps;

  // Trapezoid index containing q, or -1 when q lies on a wall or arc.
  int locate(const Vec2& q) const;
};

// Vertical decomposition of an arrangement of open planar segments in general
// position (no two sharing more than one point). Vertical inputs act as full
// walls. Throws Degenerate on overlapping collinear arcs.
TrapezoidalDecomposition trapezoidal_decomposition(const std::vector<PlanarArc>& input);

struct CuttingOptions {
  int D = 3;
  long sample_c_num = 1;  // p = min(1/2, c * D^2 / n)
  long sample_c_den = 1;
  int a_cut = 4;          // per-cell curve bound: a_cut * n / D^2
  int resample_budget = 16;
  int threads = 1;
};

struct CellRefinement {
  int cell_index = -1;              // into StageOneResult::cells
  std::vector<PlanarArc> arcs;      // every arc of the cell's pieces
  std::vector<int> sampled;         // indices into arcs
  std::vector<int> vertical_curves; // vertical input lines meeting the cell
  TrapezoidalDecomposition decomposition;
  std::vector<std::vector<int>> trap_curves;  // per trapezoid: sorted curve ids
  int resamples = 0;
};

// Refine one unacceptable cell: Bernoulli-sample the arcs, decompose, verify
// the per-trapezoid source-curve bound, resample on failure.
CellRefinement refine_cell(const StageOneResult& stage1,
                           const std::vector<Segment3>& curves, int cell_index,
                           long n_total, const CuttingOptions& opts, Rng& rng);

struct DecompositionResult {
  StageOneResult stage1;
  std::vector<CellRefinement> refinements;  // one per unacceptable cell
  std::vector<int> lines_with_sampled_arc;  // the excluded set for the ledger
  std::int64_t cell_count = 0;              // acceptable cells + trapezoids
  std::int64_t sampled_arc_total = 0;
  std::int64_t boundary_crossings = 0;      // conservative ledger for lines off
                                            // the sampled set and off Z(P)
  std::int64_t zero_set_crossings = 0;      // type-1 part of the ledger
};

DecompositionResult second_stage(StageOneResult stage1,
                                 const std::vector<Segment3>& curves,
                                 const CuttingOptions& opts, Rng& rng);

// Where a query point lives in the full decomposition.
struct CellLocation {
  enum Kind { Boundary, Stage1Cell, SecondStage, ImplicitEmpty } kind = ImplicitEmpty;
  int cell_index = -1;  // stage-1 cell, when applicable
  int refinement = -1;  // index into refinements
  int trapezoid = -1;
};

CellLocation locate_point(const DecompositionResult& result, const Vec3& p);

// Arc of a projected piece of `seg` clipped to outer rational bounds.
PlanarArc arc_of_piece(const Segment3& seg, const CurveTrace& trace, int piece_index,
                       int curve_index);

}  // namespace polypart

#endif
