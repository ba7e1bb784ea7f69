#ifndef POLYPART_ERRORS_HPP
#define POLYPART_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace polypart {

// All recoverable failures carry a stable machine-readable kind tag; the CLI
// surfaces them as {"error": {"kind": ..., "detail": ...}}.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& detail)
      : std::runtime_error(kind + ": " + detail), kind_(std::move(kind)) {}
  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

#define POLYPART_ERROR_TYPE(Name, tag)                                   \
  class Name : public Error {                                            \
   public:                                                               \
    explicit Name(const std::string& detail) : Error(tag, detail) {}     \
  }

POLYPART_ERROR_TYPE(DimensionMismatch, "dimension_mismatch");
POLYPART_ERROR_TYPE(ZeroPolynomial, "zero_polynomial");
POLYPART_ERROR_TYPE(ZeroDirection, "zero_direction");
POLYPART_ERROR_TYPE(Degenerate, "degenerate_input");
POLYPART_ERROR_TYPE(VerticalInput, "vertical_input");
POLYPART_ERROR_TYPE(IntersectingLines, "intersecting_lines");
POLYPART_ERROR_TYPE(NonDisjointInput, "non_disjoint_input");
POLYPART_ERROR_TYPE(RetryBudgetExhausted, "retry_budget_exhausted");
POLYPART_ERROR_TYPE(ResampleBudgetExhausted, "resample_budget_exhausted");
POLYPART_ERROR_TYPE(DimensionTooSmall, "dimension_too_small");
POLYPART_ERROR_TYPE(LineInZeroSet, "line_in_zero_set");
POLYPART_ERROR_TYPE(ProjectionInDiscriminant, "projection_in_discriminant");
POLYPART_ERROR_TYPE(ParseError, "parse_error");
POLYPART_ERROR_TYPE(InvalidArgument, "invalid_argument");

#undef POLYPART_ERROR_TYPE

// Internal invariant check, always on. These guard the algebraic certificates
// (degree/weight/label properties), not user input.
#define POLYPART_CHECK(cond, msg)                                         \
  do {                                                                    \
    if (!(cond)) {                                                        \
      throw std::logic_error(std::string("invariant failed at ") +        \
                             __FILE__ + ":" + std::to_string(__LINE__) +  \
                             ": " + (msg));                               \
    }                                                                     \
  } while (0)

}  // namespace polypart

#endif
