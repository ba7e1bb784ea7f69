#ifndef POLYPART_POINT_PARTITION_HPP
#define POLYPART_POINT_PARTITION_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "polypart/polynomial.hpp"
#include "polypart/rng.hpp"
#include "polypart/types.hpp"

namespace polypart {

// Weighted multiset of points in R^d (d = 2 or 3).
struct WeightedSet {
  std::vector<WeightedPoint> points;
  std::int64_t total_weight() const {
    std::int64_t w = 0;
    for (const auto& p : points) w += p.weight;
    return w;
  }
};

struct DissectResult {
  Polynomial poly;               // nonzero, degree <= requested D
  std::vector<char> dissected;   // per input set
  int retries = 0;
};

// Random polynomial of degree <= D leaving at most 7/8 of each dissected
// set's weight strictly on either side; at least half the sets end up
// dissected. Throws RetryBudgetExhausted.
DissectResult dissect(const std::vector<WeightedSet>& sets, int d, int D, Rng& rng,
                      int retry_budget = 64);

// Exact per-set side weights for a candidate polynomial (oracle-style count).
struct SideWeights {
  std::int64_t positive = 0, negative = 0, boundary = 0;
};
SideWeights side_weights(const Polynomial& f, const WeightedSet& set);
bool is_dissected(const SideWeights& w);

struct SignCell {
  std::vector<int> signs;  // +1/-1 per factor
  std::int64_t weight = 0;
};

struct PartitionPoly {
  std::vector<Polynomial> factors;   // canonical primitive factors, in order
  std::vector<int> factor_degree_cap;
  int dim = 3;
  std::uint64_t rng_seed = 0;

  Polynomial product() const;
  int degree() const {  // sum of factor degrees; 0 when empty (product = 1)
    int d = 0;
    for (const auto& f : factors) d += f.degree();
    return d;
  }
};

struct PointPartitionOptions {
  std::int64_t r = 64;
  int c_cell = 4;   // per-cell bound: weight <= c_cell * total / r
  int c_deg = 4;    // reported degree target: deg <= c_deg * r^(1/d)
  std::optional<int> max_total_degree;  // stop once the budget is reached
  int dissect_retry_budget = 64;
  int round_budget = 0;  // 0: default 4 * ceil(log2 r)
};

struct PointPartitionResult {
  PartitionPoly poly;
  std::vector<SignCell> cells;  // nonempty sign cells, lexicographic by signs
  std::int64_t boundary_weight = 0;
  std::int64_t total_weight = 0;
  int rounds = 0;
  int retries = 0;
  bool target_met = true;  // every cell within the weight cap
};

// Iterated dissection partitioning for a weighted multiset (AMS-style).
// Deterministic for a fixed rng state.
PointPartitionResult partition_points(const std::vector<WeightedPoint>& points, int d,
                                      const PointPartitionOptions& opts, Rng& rng);

// Signs of a point against every factor; 0 entries mean "on the boundary".
std::vector<int> factor_signs(const PartitionPoly& poly, const WeightedPoint& p);

// Nonzero polynomial of degree <= D vanishing on every line, through a
// nullspace of Veronese-lifted samples. Throws DimensionTooSmall when no
// nonzero polynomial exists at this degree.
Polynomial interpolate_vanishing(const std::vector<Line3>& lines, int D);

// One nonzero v with M v = 0 (empty when the columns are independent).
std::vector<Rational> nullspace_vector(std::vector<std::vector<Rational>> m,
                                       std::size_t cols);

}  // namespace polypart

#endif
