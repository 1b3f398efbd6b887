#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ppg/moebius.hpp"

namespace ppg {

/// One interval of definition with its matrix. Intervals are closed and
/// overlap at shared endpoints; continuity makes the breakpoint value
/// consistent from either side.
struct Piece {
  ExtendedReal lo;
  ExtendedReal hi;
  SL2Matrix matrix;

  bool operator==(const Piece&) const = default;
};

enum class ViolationKind {
  empty_map,
  bad_interval,    // lo >= hi
  gap,             // tiling hole (including missing -inf/+inf ends)
  overlap,
  discontinuity,
  pole_inside,
  nonaffine_end,
};

std::string to_string(ViolationKind k);

/// One violated invariant found while validating a piece list.
struct PieceViolation {
  ViolationKind kind;
  std::string detail;
  std::optional<ExtendedReal> where;        // offending breakpoint, if any
  std::optional<ProjPoint> left_value;      // one-sided values at a
  std::optional<ProjPoint> right_value;     // discontinuity
};

/// Rejection carrying every violation, not just the first.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<PieceViolation> violations);
  const std::vector<PieceViolation>& violations() const { return violations_; }

 private:
  std::vector<PieceViolation> violations_;
};

/// Increasing piecewise-projective homeomorphism of the real line in normal
/// form: pieces tile (-inf, +inf), values agree at breakpoints, poles stay
/// outside their pieces, end pieces are affine, and consecutive matrices are
/// distinct. Construct through pp_make.
class PPMap {
 public:
  /// Default-constructed maps are the identity.
  PPMap();
  static PPMap identity();
  const std::vector<Piece>& pieces() const { return pieces_; }
  bool is_identity() const;

  bool operator==(const PPMap&) const = default;

 private:
  friend PPMap pp_make(std::vector<Piece> pieces);
  explicit PPMap(std::vector<Piece> pieces) : pieces_(std::move(pieces)) {}
  std::vector<Piece> pieces_;
};

/// Smallest closed interval outside which the map is the identity. `empty`
/// marks the identity map (lo/hi are then meaningless zeros).
struct SupportInterval {
  ExtendedReal lo;
  ExtendedReal hi;
  bool compact = true;
  bool empty = true;
};

/// Validates and normalizes a piece list. Throws ValidationError listing
/// every violated invariant (gaps, overlaps, discontinuities with both
/// one-sided values, poles inside pieces, non-affine end pieces).
PPMap pp_make(std::vector<Piece> pieces);

/// f after g: (f . g)(x) = f(g(x)). Breakpoints are g's together with
/// g-preimages of f's; spurious ones merge away in normalization.
PPMap pp_compose(const PPMap& f, const PPMap& g);

PPMap pp_invert(const PPMap& f);

/// f g f^-1 g^-1.
PPMap pp_commutator(const PPMap& f, const PPMap& g);

RealQuadratic pp_eval(const PPMap& f, const RealQuadratic& x);

SupportInterval pp_support(const PPMap& f);

/// True iff every piece matrix has all entries in Z[1/T].
bool pp_in_subgroup(const PPMap& f, const PrimeSet& T);

/// Normal forms are canonical, so equality is piecewise-syntactic.
bool pp_equals(const PPMap& f, const PPMap& g);

std::string to_string(const PPMap& f);

}  // namespace ppg
