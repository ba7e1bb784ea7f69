#ifndef POLYPART_TYPES_HPP
#define POLYPART_TYPES_HPP

#include <cstdint>
#include <vector>

#include "polypart/errors.hpp"
#include "polypart/numeric.hpp"

namespace polypart {

struct Line3 {
  Vec3 origin{Rational(0), Rational(0), Rational(0)};
  Vec3 direction{Rational(0), Rational(0), Rational(0)};
  int id = -1;

  bool has_zero_direction() const {
    return direction[0] == 0 && direction[1] == 0 && direction[2] == 0;
  }
  bool is_vertical() const {
    return direction[0] == 0 && direction[1] == 0 && direction[2] != 0;
  }
  Vec3 at(const Rational& t) const {
    return {origin[0] + t * direction[0], origin[1] + t * direction[1],
            origin[2] + t * direction[2]};
  }
  // z as a function of the parameter, for height comparisons.
  Rational z_at(const Rational& t) const { return origin[2] + t * direction[2]; }
};

// A line piece given by an open parameter interval; full lines keep infinite
// ends. All pipeline entry points consume these.
struct Segment3 {
  Line3 line;
  ExtRat t_lo = ExtRat::neg_inf();
  ExtRat t_hi = ExtRat::pos_inf();

  bool is_full_line() const { return !t_lo.finite() && !t_hi.finite(); }
  bool contains_param(const Rational& t) const {
    if (t_lo.finite() && !(t_lo.value() < t)) return false;
    if (t_hi.finite() && !(t < t_hi.value())) return false;
    return true;
  }
};

struct WeightedPoint {
  Vec3 coords{Rational(0), Rational(0), Rational(0)};  // z unused when dim == 2
  int dim = 3;
  std::int64_t weight = 1;
};

}  // namespace polypart

#endif
