#pragma once

#include <string>

#include "ppg/numbers.hpp"

namespace ppg {

enum class Ordering { less, equal, greater };

std::string to_string(Ordering o);

/// Exact value rat + coeff*sqrt(radicand) in a real quadratic field.
///
/// Canonical form: radicand is squarefree and >= 2 when coeff != 0; a pure
/// rational has coeff = 0 and radicand = 0. Two canonical values denote the
/// same real iff their representations are identical, so operator== is value
/// equality.
class RealQuadratic {
 public:
  RealQuadratic() : rat_(0), coeff_(0), radicand_(0) {}
  RealQuadratic(const Rational& r) : rat_(r), coeff_(0), radicand_(0) {}
  RealQuadratic(const Integer& n) : rat_(n), coeff_(0), radicand_(0) {}
  RealQuadratic(long n) : rat_(n), coeff_(0), radicand_(0) {}

  /// General constructor; canonicalizes (extracts square factors of the
  /// radicand, folds rational cases). Throws DomainError on negative
  /// radicand.
  RealQuadratic(Rational rat, Rational coeff, Integer radicand);

  /// sqrt(q) for rational q >= 0.
  static RealQuadratic sqrt_of(const Rational& q);

  /// sqrt(u*v) for a product that is >= 0, computed by decomposing u and v
  /// separately. A product of coprime squarefree numbers is squarefree, so
  /// the factoring effort stays at the size of the factors even when their
  /// product is hard to factor directly.
  static RealQuadratic sqrt_of_product(const Rational& u, const Rational& v);

  const Rational& rat() const { return rat_; }
  const Rational& coeff() const { return coeff_; }
  const Integer& radicand() const { return radicand_; }

  bool is_rational() const { return coeff_ == 0; }
  /// Throws DomainError when the value is irrational.
  const Rational& as_rational() const;

  int sign() const;
  bool is_zero() const { return coeff_ == 0 && rat_ == 0; }

  /// Galois conjugate rat - coeff*sqrt(radicand).
  RealQuadratic conjugate() const;
  /// Field norm rat^2 - coeff^2 * radicand (rational; zero only at zero).
  Rational norm() const;

  /// Strict rational bounds lo < value < hi with denominator 2^prec_bits
  /// (lo = hi = value when rational).
  void bracket(unsigned long prec_bits, Rational& lo, Rational& hi) const;

  bool operator==(const RealQuadratic&) const = default;

  RealQuadratic operator-() const;
  friend RealQuadratic operator+(const RealQuadratic&, const RealQuadratic&);
  friend RealQuadratic operator-(const RealQuadratic&, const RealQuadratic&);
  friend RealQuadratic operator*(const RealQuadratic&, const RealQuadratic&);
  friend RealQuadratic operator/(const RealQuadratic&, const RealQuadratic&);

 private:
  Rational rat_;
  Rational coeff_;
  Integer radicand_;
};

int rq_sign(const RealQuadratic& x);

/// Exact order of the denoted reals. Same field reduces to a sign; distinct
/// radicands use adaptive-precision rational brackets (64 bits, doubling) —
/// terminating because distinct canonical forms denote distinct reals.
Ordering rq_compare(const RealQuadratic& x, const RealQuadratic& y);

/// Arithmetic dispatcher over op in {'+','-','*','/'}.
RealQuadratic rq_field_arith(const RealQuadratic& x, const RealQuadratic& y,
                             char op);

Integer floor_of(const RealQuadratic& x);
Integer ceil_of(const RealQuadratic& x);

/// Some rational strictly between a and b; requires a < b.
Rational rational_between(const RealQuadratic& a, const RealQuadratic& b);

std::string to_string(const RealQuadratic& x);

/// A real-quadratic value extended by the symbols -inf and +inf, totally
/// ordered. (The single point at infinity of the projective line is a
/// separate notion, handled by the Moebius layer.)
class ExtendedReal {
 public:
  ExtendedReal() : kind_(Kind::finite) {}
  ExtendedReal(RealQuadratic v) : kind_(Kind::finite), value_(std::move(v)) {}
  ExtendedReal(const Rational& v) : kind_(Kind::finite), value_(v) {}
  ExtendedReal(long v) : kind_(Kind::finite), value_(v) {}

  static ExtendedReal neg_inf();
  static ExtendedReal pos_inf();

  bool is_finite() const { return kind_ == Kind::finite; }
  bool is_neg_inf() const { return kind_ == Kind::neg_inf; }
  bool is_pos_inf() const { return kind_ == Kind::pos_inf; }

  /// Throws DomainError when infinite.
  const RealQuadratic& finite() const;

  bool operator==(const ExtendedReal&) const = default;

 private:
  enum class Kind { neg_inf, finite, pos_inf };
  Kind kind_;
  RealQuadratic value_;
};

Ordering compare(const ExtendedReal& a, const ExtendedReal& b);

std::string to_string(const ExtendedReal& x);

}  // namespace ppg
