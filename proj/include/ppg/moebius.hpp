#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "ppg/quadratic.hpp"

namespace ppg {

/// Determinant-one 2x2 rational matrix acting on the projective line by
/// x -> (ax+b)/(cx+d). Stored sign-normalized (first nonzero entry of
/// (a,b,c,d) positive) so M and -M, which act identically, share one
/// representative.
class SL2Matrix {
 public:
  SL2Matrix() : a_(1), b_(0), c_(0), d_(1) {}
  /// Throws DomainError unless ad - bc = 1 exactly.
  SL2Matrix(Rational a, Rational b, Rational c, Rational d);

  static SL2Matrix identity() { return SL2Matrix(); }

  const Rational& a() const { return a_; }
  const Rational& b() const { return b_; }
  const Rational& c() const { return c_; }
  const Rational& d() const { return d_; }

  bool is_identity() const;
  /// True iff c = 0, i.e. the map is affine and fixes infinity.
  bool is_affine() const { return c_ == 0; }
  Rational trace() const { return a_ + d_; }

  SL2Matrix inverse() const;
  SL2Matrix operator*(const SL2Matrix& rhs) const;
  /// Integer power; negative exponents go through the inverse.
  SL2Matrix pow(long k) const;

  /// The preimage of infinity, -d/c, when c != 0.
  std::optional<Rational> pole() const;

  bool operator==(const SL2Matrix&) const = default;

 private:
  Rational a_, b_, c_, d_;
};

/// Point of the projective line: a finite real-quadratic value or the single
/// point at infinity.
class ProjPoint {
 public:
  ProjPoint(RealQuadratic v) : value_(std::move(v)) {}
  ProjPoint(const Rational& v) : value_(RealQuadratic(v)) {}
  static ProjPoint infinity();

  bool is_infinity() const { return !value_.has_value(); }
  /// Throws DomainError at infinity.
  const RealQuadratic& finite() const;

  bool operator==(const ProjPoint&) const = default;

 private:
  ProjPoint() = default;
  std::optional<RealQuadratic> value_;
};

/// Projective action, total on P^1: the pole maps to infinity and infinity
/// maps to a/c (or stays put when c = 0).
ProjPoint mob_apply(const SL2Matrix& M, const ProjPoint& x);

/// Order-preserving application on extended reals, for use where the pole is
/// known to be excluded: finite x with cx + d = 0 is an error, and infinite x
/// requires an affine matrix (which fixes both ends of the line).
ExtendedReal mob_apply_monotone(const SL2Matrix& M, const ExtendedReal& x);

enum class MapClass { identity, parabolic, elliptic, hyperbolic };

std::string to_string(MapClass c);

/// Fixed points of the projective action with dynamical labels. `points` is
/// empty for the identity (everything is fixed) and for elliptic maps
/// (nothing real is fixed); attracting/repelling index into `points` for
/// hyperbolic maps.
struct FixedPointData {
  MapClass cls = MapClass::identity;
  std::vector<ProjPoint> points;
  std::optional<std::size_t> attracting;
  std::optional<std::size_t> repelling;
};

/// Solves c x^2 + (d-a) x - b = 0 exactly and classifies by |trace|:
/// hyperbolic > 2, parabolic = 2 (non-identity), elliptic < 2. Hyperbolic
/// labels come from the derivative (c xi + d)^-2, attracting iff < 1.
FixedPointData mob_fixed_points(const SL2Matrix& M);

/// True iff all four entries lie in Z[1/T].
bool entries_in_ring(const SL2Matrix& M, const PrimeSet& T);

/// g^-1 M g, sign-normalized.
SL2Matrix mob_conjugate(const SL2Matrix& M, const SL2Matrix& g);

std::string to_string(const SL2Matrix& M);
std::string to_string(const ProjPoint& x);

}  // namespace ppg
