#ifndef POLYPART_RNG_HPP
#define POLYPART_RNG_HPP

#include <cstdint>

#include "polypart/numeric.hpp"

namespace polypart {

// Deterministic splittable generator (splitmix64 core). Outputs depend only
// on the seed, never on the platform or thread schedule: parallel call sites
// must take a split() stream keyed by a stable index.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, n), n >= 1. Rejection keeps it unbiased.
  std::uint64_t below(std::uint64_t n) {
    std::uint64_t limit = n * ((~std::uint64_t{0}) / n);
    std::uint64_t v;
    do {
      v = next();
    } while (v >= limit);
    return v % n;
  }

  std::int64_t range(std::int64_t lo, std::int64_t hi) {  // inclusive ends
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

  bool bernoulli(const Rational& p) {
    // Exact: draw below den, compare with num. Requires 0 <= p <= 1.
    Integer den = p.get_den();
    Integer num = p.get_num();
    if (!den.fits_ulong_p()) {
      // Fold the denominator down; denominators here come from config
      // rationals and stay tiny in practice.
      Rational r(static_cast<long>(below(1u << 30)), 1u << 30);
      return r < p;
    }
    std::uint64_t d = den.get_ui();
    std::uint64_t n = num.fits_ulong_p() ? num.get_ui() : d;
    return below(d) < n;
  }

  // Rational in [-bound, bound] with denominator dividing `den`.
  Rational rational(long bound, unsigned long den) {
    std::int64_t span = 2 * static_cast<std::int64_t>(bound) * static_cast<std::int64_t>(den);
    std::int64_t num = range(-span / 2, span / 2);
    Rational q(static_cast<long>(num), den);
    q.canonicalize();
    return q;
  }

  // Independent child stream for work item `index`.
  Rng split(std::uint64_t index) const {
    std::uint64_t z = state_ ^ (0x9e3779b97f4a7c15ull * (index + 0x632be59bd9b4e019ull));
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return Rng(z ^ (z >> 31));
  }

 private:
  std::uint64_t state_;
};

}  // namespace polypart

#endif
