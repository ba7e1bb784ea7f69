#include "polypart/point_partition.hpp"

#include <algorithm>
#include <map>

namespace polypart {

namespace {

std::span<const Rational> point_span(const WeightedPoint& p) {
  return std::span<const Rational>(p.coords.data(), static_cast<std::size_t>(p.dim));
}

const WeightedPoint& weighted_draw(const WeightedSet& set, Rng& rng) {
  std::int64_t total = set.total_weight();
  std::int64_t u = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(total)));
  for (const auto& p : set.points) {
    u -= p.weight;
    if (u < 0) return p;
  }
  return set.points.back();
}

int min_degree_for_sets(int d, std::size_t k) {
  int D = 1;
  while (veronese_dimension(d, D) - 1 < k) ++D;
  return D;
}

}  // namespace

std::vector<Rational> nullspace_vector(std::vector<std::vector<Rational>> m,
                                       std::size_t cols) {
  const std::size_t rows = m.size();
  std::vector<std::size_t> pivot_col;
  std::size_t rank = 0;
  for (std::size_t col = 0; col < cols && rank < rows; ++col) {
    std::size_t pr = rank;
    while (pr < rows && m[pr][col] == 0) ++pr;
    if (pr == rows) continue;
    std::swap(m[rank], m[pr]);
    Rational inv = m[rank][col];
    for (std::size_t j = col; j < cols; ++j) m[rank][j] /= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == rank || m[i][col] == 0) continue;
      Rational f = m[i][col];
      for (std::size_t j = col; j < cols; ++j) m[i][j] -= f * m[rank][j];
    }
    pivot_col.push_back(col);
    ++rank;
  }
  // First free column hosts the null vector.
  std::vector<bool> is_pivot(cols, false);
  for (auto c : pivot_col) is_pivot[c] = true;
  std::size_t free_col = cols;
  for (std::size_t c = 0; c < cols; ++c) {
    if (!is_pivot[c]) {
      free_col = c;
      break;
    }
  }
  if (free_col == cols) return {};
  std::vector<Rational> v(cols, Rational(0));
  v[free_col] = 1;
  for (std::size_t r = 0; r < pivot_col.size(); ++r) v[pivot_col[r]] = -m[r][free_col];
  return v;
}

SideWeights side_weights(const Polynomial& f, const WeightedSet& set) {
  SideWeights w;
  for (const auto& p : set.points) {
    int s = f.sign_at(point_span(p));
    if (s > 0)
      w.positive += p.weight;
    else if (s < 0)
      w.negative += p.weight;
    else
      w.boundary += p.weight;
  }
  return w;
}

bool is_dissected(const SideWeights& w) {
  std::int64_t total = w.positive + w.negative + w.boundary;
  return 8 * w.positive <= 7 * total && 8 * w.negative <= 7 * total;
}

DissectResult dissect(const std::vector<WeightedSet>& sets, int d, int D, Rng& rng,
                      int retry_budget) {
  if (d != 2 && d != 3) throw DimensionMismatch("dissect supports d in {2, 3}");
  if (D < 1) throw InvalidArgument("dissect requires D >= 1");
  if (sets.empty()) throw InvalidArgument("dissect requires at least one set");
  for (const auto& s : sets) {
    if (s.points.empty()) throw InvalidArgument("dissect forbids empty sets");
  }
  const std::size_t k = sets.size();
  const std::size_t slots = veronese_dimension(d, D) - 1;
  const std::size_t need = (k + 1) / 2;

  for (int attempt = 0; attempt < retry_budget; ++attempt) {
    // Spread sample slots across the sets in a random order.
    std::vector<std::size_t> order(k);
    for (std::size_t i = 0; i < k; ++i) order[i] = i;
    for (std::size_t i = k; i > 1; --i)
      std::swap(order[i - 1], order[rng.below(i)]);

    std::vector<std::vector<Rational>> lifted;
    lifted.reserve(slots);
    for (std::size_t slot = 0; slot < slots; ++slot) {
      const WeightedSet& set = sets[order[slot % k]];
      const WeightedPoint& p = weighted_draw(set, rng);
      lifted.push_back(veronese(point_span(p), D));
    }
    std::vector<Rational> coeffs = nullspace_vector(std::move(lifted), slots + 1);
    POLYPART_CHECK(!coeffs.empty(), "lifted sample matrix must be rank deficient");

    auto monos = monomials_up_to(d, D);
    std::vector<std::pair<Exponents, Rational>> terms;
    for (std::size_t i = 0; i < monos.size(); ++i) {
      if (coeffs[i] != 0) terms.emplace_back(monos[i], coeffs[i]);
    }
    Polynomial f = Polynomial::from_terms(d, terms).primitive_part();
    if (f.is_zero()) continue;

    DissectResult result;
    result.poly = f;
    result.retries = attempt;
    result.dissected.assign(k, 0);
    std::size_t good = 0;
    for (std::size_t i = 0; i < k; ++i) {
      if (is_dissected(side_weights(f, sets[i]))) {
        result.dissected[i] = 1;
        ++good;
      }
    }
    if (good >= need) return result;
  }
  throw RetryBudgetExhausted("dissect failed for " + std::to_string(k) +
                             " sets at degree " + std::to_string(D));
}

Polynomial PartitionPoly::product() const {
  Polynomial p = Polynomial::constant(dim, Rational(1));
  for (const auto& f : factors) p = p * f;
  return p;
}

std::vector<int> factor_signs(const PartitionPoly& poly, const WeightedPoint& p) {
  std::vector<int> signs;
  signs.reserve(poly.factors.size());
  for (const auto& f : poly.factors) signs.push_back(f.sign_at(point_span(p)));
  return signs;
}

PointPartitionResult partition_points(const std::vector<WeightedPoint>& points, int d,
                                      const PointPartitionOptions& opts, Rng& rng) {
  if (opts.r < 2) throw InvalidArgument("partition_points requires r >= 2");
  PointPartitionResult out;
  out.poly.dim = d;
  for (const auto& p : points) out.total_weight += p.weight;
  if (points.empty()) return out;  // factors empty, product = 1, no cells

  // weight cap: weight * r <= c_cell * total
  auto within_cap = [&](std::int64_t w) {
    return w * opts.r <= static_cast<std::int64_t>(opts.c_cell) * out.total_weight;
  };

  int round_budget = opts.round_budget;
  if (round_budget == 0) {
    int lg = 0;
    while ((std::int64_t{1} << lg) < opts.r) ++lg;
    round_budget = 4 * std::max(1, lg);
  }

  std::vector<WeightedSet> active;
  {
    WeightedSet all;
    all.points = points;
    if (!within_cap(all.total_weight())) active.push_back(std::move(all));
  }

  int degree_used = 0;
  while (!active.empty() && out.rounds < round_budget) {
    const std::size_t k = active.size();
    int D = min_degree_for_sets(d, k);
    if (opts.max_total_degree) {
      int remaining = *opts.max_total_degree - degree_used;
      if (D > remaining) break;  // degree budget exhausted
    }
    DissectResult dr = dissect(active, d, D, rng, opts.dissect_retry_budget);
    out.retries += dr.retries;
    out.poly.factors.push_back(dr.poly);
    out.poly.factor_degree_cap.push_back(D);
    degree_used += dr.poly.degree();
    ++out.rounds;

    std::vector<WeightedSet> next;
    for (std::size_t i = 0; i < k; ++i) {
      if (!dr.dissected[i]) {
        next.push_back(std::move(active[i]));  // resplit only dissected sets
        continue;
      }
      WeightedSet pos, neg;
      for (auto& p : active[i].points) {
        int s = dr.poly.sign_at(point_span(p));
        if (s > 0)
          pos.points.push_back(std::move(p));
        else if (s < 0)
          neg.points.push_back(std::move(p));
        // boundary points leave the recursion: they live on Z(f)
      }
      if (!pos.points.empty() && !within_cap(pos.total_weight()))
        next.push_back(std::move(pos));
      if (!neg.points.empty() && !within_cap(neg.total_weight()))
        next.push_back(std::move(neg));
    }
    active = std::move(next);
  }
  out.target_met = active.empty();

  // Final classification of every input point over all factors.
  std::map<std::vector<int>, std::int64_t> cells;
  for (const auto& p : points) {
    std::vector<int> signs = factor_signs(out.poly, p);
    bool boundary = false;
    for (int s : signs) boundary = boundary || s == 0;
    if (boundary) {
      out.boundary_weight += p.weight;
    } else {
      cells[signs] += p.weight;
    }
  }
  for (auto& [signs, w] : cells) out.cells.push_back({signs, w});
  return out;
}

Polynomial interpolate_vanishing(const std::vector<Line3>& lines, int D) {
  if (D < 1) throw InvalidArgument("interpolate_vanishing requires D >= 1");
  if (lines.empty()) throw InvalidArgument("interpolate_vanishing requires lines");
  const std::size_t cols = veronese_dimension(3, D);
  std::vector<std::vector<Rational>> m;
  for (const auto& line : lines) {
    if (line.has_zero_direction()) throw ZeroDirection("line with zero direction");
    for (int t = 0; t <= D + 1; ++t) {
      Vec3 p = line.at(Rational(t));
      m.push_back(veronese(std::span<const Rational>(p.data(), 3), D));
    }
  }
  std::vector<Rational> coeffs = nullspace_vector(std::move(m), cols);
  if (coeffs.empty())
    throw DimensionTooSmall("no degree-" + std::to_string(D) +
                            " polynomial vanishes on all " +
                            std::to_string(lines.size()) + " lines");
  auto monos = monomials_up_to(3, D);
  std::vector<std::pair<Exponents, Rational>> terms;
  for (std::size_t i = 0; i < monos.size(); ++i) {
    if (coeffs[i] != 0) terms.emplace_back(monos[i], coeffs[i]);
  }
  Polynomial out = Polynomial::from_terms(3, terms).primitive_part();
  for (const auto& line : lines) {
    POLYPART_CHECK(restrict_to_line(out, line).is_zero(),
                   "interpolated polynomial must vanish on every input line");
  }
  return out;
}

}  // namespace polypart
