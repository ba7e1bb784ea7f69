#ifndef POLYPART_GEOMETRY_HPP
#define POLYPART_GEOMETRY_HPP

#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "polypart/types.hpp"

namespace polypart {

// xy-projection of a line: a planar point for vertical lines, otherwise a
// planar line through origin2 with direction dir2.
struct PlanarProjection {
  bool is_point = false;
  Vec2 origin{Rational(0), Rational(0)};
  Vec2 dir{Rational(0), Rational(0)};  // zero when is_point
};

PlanarProjection xy_projection(const Line3& line);

struct VisibilityPair {
  Rational t1, t2;  // parameters on the two curves
  Vec3 p1, p2;      // the two 3D points; p1* == p2*
};

// The unique vertical-visibility pair of two non-vertical curves, if any.
// nullopt when the projections are parallel and distinct (or the segment
// parameter intervals miss the crossing). Throws Degenerate on coincident
// projections and VerticalInput on vertical curves.
std::optional<VisibilityPair> visibility_pair(const Segment3& a, const Segment3& b);

struct IndexedPair {
  int i = 0, j = 0;  // indices into the input curve list
  VisibilityPair vis;
};

// All visibility pairs among the curves (non-vertical ones only; vertical
// curves must be filtered by the caller).
std::vector<IndexedPair> all_visibility_pairs(const std::vector<Segment3>& curves,
                                              int threads = 1);

// Multiset of visibility points, weights accumulated by exact coordinate.
// `region`, when set, keeps only unsplit pairs: both points must satisfy it.
std::vector<WeightedPoint> visibility_multiset(
    const std::vector<Segment3>& curves,
    const std::function<bool(const Vec3&)>* region = nullptr, int threads = 1);

std::vector<WeightedPoint> multiset_from_points(const std::vector<Vec3>& points, int dim);

// Exact height comparison at the unique projection crossing. Returns +1 when
// a passes above b, -1 below, nullopt for parallel projections. Throws
// IntersectingLines when the heights coincide and Degenerate for coincident
// projections.
std::optional<int> above(const Line3& a, const Line3& b);

}  // namespace polypart

#endif
