#ifndef POLYPART_NUMERIC_HPP
#define POLYPART_NUMERIC_HPP

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <optional>
#include <string>

namespace polypart {

using Integer = mpz_class;
using Rational = mpq_class;

// Canonical "num/den" formatting; parser also accepts plain integers.
std::string rational_to_string(const Rational& q);
Rational rational_from_string(const std::string& s);

inline int sign(const Rational& q) { return sgn(q); }
inline Rational rational_abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

// Largest integer <= q and smallest integer >= q.
Integer floor_int(const Rational& q);
Integer ceil_int(const Rational& q);

// The unique rational with smallest denominator (ties: smallest |numerator|)
// strictly inside the open interval (lo, hi). Requires lo < hi.
Rational simplest_rational_between(const Rational& lo, const Rational& hi);

using Vec2 = std::array<Rational, 2>;
using Vec3 = std::array<Rational, 3>;

inline bool operator<(const Vec3& a, const Vec3& b) = delete;

struct Vec3Less {
  bool operator()(const Vec3& a, const Vec3& b) const {
    for (int i = 0; i < 3; ++i) {
      if (a[i] != b[i]) return a[i] < b[i];
    }
    return false;
  }
};

// Rational extended with +/-infinity endpoints for parameter intervals.
class ExtRat {
 public:
  enum Kind { NegInf = -1, Finite = 0, PosInf = 1 };

  ExtRat() : kind_(Finite), v_(0) {}
  ExtRat(Rational v) : kind_(Finite), v_(std::move(v)) {}
  static ExtRat neg_inf() { return ExtRat(NegInf); }
  static ExtRat pos_inf() { return ExtRat(PosInf); }

  Kind kind() const { return kind_; }
  bool finite() const { return kind_ == Finite; }
  const Rational& value() const { return v_; }

  friend bool operator==(const ExtRat& a, const ExtRat& b) {
    if (a.kind_ != b.kind_) return false;
    return a.kind_ != Finite || a.v_ == b.v_;
  }
  friend bool operator<(const ExtRat& a, const ExtRat& b) {
    if (a.kind_ != b.kind_) return a.kind_ < b.kind_;
    return a.kind_ == Finite && a.v_ < b.v_;
  }
  friend bool operator<=(const ExtRat& a, const ExtRat& b) { return a < b || a == b; }

 private:
  explicit ExtRat(Kind k) : kind_(k), v_(0) {}
  Kind kind_;
  Rational v_;
};

}  // namespace polypart

#endif
