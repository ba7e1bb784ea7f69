#include "polypart/geometry.hpp"

#include <map>

#include "polypart/parallel.hpp"

namespace polypart {

PlanarProjection xy_projection(const Line3& line) {
  if (line.has_zero_direction()) throw ZeroDirection("line with zero direction");
  PlanarProjection pr;
  if (line.is_vertical()) {
    pr.is_point = true;
    pr.origin = {line.origin[0], line.origin[1]};
    return pr;
  }
  pr.origin = {line.origin[0], line.origin[1]};
  pr.dir = {line.direction[0], line.direction[1]};
  return pr;
}

std::optional<VisibilityPair> visibility_pair(const Segment3& a, const Segment3& b) {
  const Line3& l1 = a.line;
  const Line3& l2 = b.line;
  if (l1.is_vertical() || l2.is_vertical())
    throw VerticalInput("visibility_pair requires non-vertical curves");
  if (l1.has_zero_direction() || l2.has_zero_direction())
    throw ZeroDirection("curve with zero direction");
  // Solve o1* + t d1* = o2* + s d2*.
  const Rational det = l1.direction[0] * l2.direction[1] - l1.direction[1] * l2.direction[0];
  const Rational rx = l2.origin[0] - l1.origin[0];
  const Rational ry = l2.origin[1] - l1.origin[1];
  if (det == 0) {
    // Parallel projections; coincident iff the offset is parallel too.
    const Rational cross = rx * l1.direction[1] - ry * l1.direction[0];
    if (cross == 0)
      throw Degenerate("coincident xy-projections of curves " + std::to_string(l1.id) +
                       " and " + std::to_string(l2.id));
    return std::nullopt;
  }
  const Rational t = (rx * l2.direction[1] - ry * l2.direction[0]) / det;
  const Rational s = (rx * l1.direction[1] - ry * l1.direction[0]) / det;
  if (!a.contains_param(t) || !b.contains_param(s)) return std::nullopt;
  VisibilityPair vp;
  vp.t1 = t;
  vp.t2 = s;
  vp.p1 = l1.at(t);
  vp.p2 = l2.at(s);
  return vp;
}

std::vector<IndexedPair> all_visibility_pairs(const std::vector<Segment3>& curves,
                                              int threads) {
  const int n = static_cast<int>(curves.size());
  std::vector<std::vector<IndexedPair>> rows(n);
  parallel_for(n, threads, [&](int i) {
    for (int j = i + 1; j < n; ++j) {
      auto vp = visibility_pair(curves[i], curves[j]);
      if (vp) rows[i].push_back({i, j, std::move(*vp)});
    }
  });
  std::vector<IndexedPair> out;
  for (auto& row : rows)
    for (auto& p : row) out.push_back(std::move(p));
  return out;
}

std::vector<WeightedPoint> visibility_multiset(
    const std::vector<Segment3>& curves,
    const std::function<bool(const Vec3&)>* region, int threads) {
  auto pairs = all_visibility_pairs(curves, threads);
  std::map<Vec3, std::int64_t, Vec3Less> acc;
  for (const auto& p : pairs) {
    if (region && !((*region)(p.vis.p1) && (*region)(p.vis.p2))) continue;
    acc[p.vis.p1] += 1;
    acc[p.vis.p2] += 1;
  }
  std::vector<WeightedPoint> out;
  out.reserve(acc.size());
  for (auto& [coords, w] : acc) out.push_back({coords, 3, w});
  return out;
}

std::vector<WeightedPoint> multiset_from_points(const std::vector<Vec3>& points, int dim) {
  std::map<Vec3, std::int64_t, Vec3Less> acc;
  for (const auto& p : points) acc[p] += 1;
  std::vector<WeightedPoint> out;
  out.reserve(acc.size());
  for (auto& [coords, w] : acc) out.push_back({coords, dim, w});
  return out;
}

std::optional<int> above(const Line3& a, const Line3& b) {
  if (a.is_vertical() || b.is_vertical())
    throw VerticalInput("above requires non-vertical lines");
  Segment3 sa{a}, sb{b};
  auto vp = visibility_pair(sa, sb);
  if (!vp) return std::nullopt;
  const Rational za = vp->p1[2];
  const Rational zb = vp->p2[2];
  if (za == zb)
    throw IntersectingLines("lines " + std::to_string(a.id) + " and " +
                            std::to_string(b.id) + " meet");
  return za > zb ? 1 : -1;
}

}  // namespace polypart
