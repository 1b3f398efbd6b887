#include "ppg/moebius.hpp"

#include <utility>

namespace ppg {

SL2Matrix::SL2Matrix(Rational a, Rational b, Rational c, Rational d)
    : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d)) {
  if (a_ * d_ - b_ * c_ != 1)
    throw DomainError("determinant is not 1: " + to_string(*this));
  const Rational* entries[] = {&a_, &b_, &c_, &d_};
  for (const Rational* e : entries) {
    if (*e == 0) continue;
    if (*e < 0) {
      a_ = -a_;
      b_ = -b_;
      c_ = -c_;
      d_ = -d_;
    }
    break;
  }
}

bool SL2Matrix::is_identity() const {
  return a_ == 1 && b_ == 0 && c_ == 0 && d_ == 1;
}

SL2Matrix SL2Matrix::inverse() const {
  return SL2Matrix(d_, -b_, -c_, a_);
}

SL2Matrix SL2Matrix::operator*(const SL2Matrix& rhs) const {
  return SL2Matrix(a_ * rhs.a_ + b_ * rhs.c_, a_ * rhs.b_ + b_ * rhs.d_,
                   c_ * rhs.a_ + d_ * rhs.c_, c_ * rhs.b_ + d_ * rhs.d_);
}

SL2Matrix SL2Matrix::pow(long k) const {
  if (k < 0) return inverse().pow(-k);
  SL2Matrix result;
  SL2Matrix base = *this;
  while (k > 0) {
    if (k & 1) result = result * base;
    base = base * base;
    k >>= 1;
  }
  return result;
}

std::optional<Rational> SL2Matrix::pole() const {
  if (c_ == 0) return std::nullopt;
  return Rational(-d_ / c_);
}

ProjPoint ProjPoint::infinity() { return ProjPoint(); }

const RealQuadratic& ProjPoint::finite() const {
  if (is_infinity()) throw DomainError("point at infinity has no finite value");
  return *value_;
}

ProjPoint mob_apply(const SL2Matrix& M, const ProjPoint& x) {
  if (x.is_infinity()) {
    if (M.is_affine()) return ProjPoint::infinity();
    return ProjPoint(M.a() / M.c());
  }
  const RealQuadratic& v = x.finite();
  RealQuadratic denom = RealQuadratic(M.c()) * v + RealQuadratic(M.d());
  if (denom.is_zero()) return ProjPoint::infinity();
  return ProjPoint((RealQuadratic(M.a()) * v + RealQuadratic(M.b())) / denom);
}

ExtendedReal mob_apply_monotone(const SL2Matrix& M, const ExtendedReal& x) {
  if (!x.is_finite()) {
    if (!M.is_affine())
      throw PreconditionError("infinite endpoint under a non-affine matrix");
    return x;  // increasing affine maps fix both ends of the line
  }
  ProjPoint image = mob_apply(M, ProjPoint(x.finite()));
  if (image.is_infinity())
    throw PreconditionError("matrix pole hit where a finite value was required");
  return ExtendedReal(image.finite());
}

std::string to_string(MapClass c) {
  switch (c) {
    case MapClass::identity: return "identity";
    case MapClass::parabolic: return "parabolic";
    case MapClass::elliptic: return "elliptic";
    case MapClass::hyperbolic: return "hyperbolic";
  }
  throw InternalError("bad map class value");
}

FixedPointData mob_fixed_points(const SL2Matrix& M) {
  FixedPointData out;
  if (M.is_identity()) {
    out.cls = MapClass::identity;
    return out;
  }
  Rational t = M.trace();
  int trace_cmp = sgn(t * t - 4);

  if (M.is_affine()) {
    // Infinity is fixed; a second fixed point b/(d-a) exists iff a != d.
    if (M.a() == M.d()) {
      out.cls = MapClass::parabolic;  // translation by b != 0
      out.points.push_back(ProjPoint::infinity());
      return out;
    }
    out.cls = MapClass::hyperbolic;
    out.points.push_back(ProjPoint::infinity());
    out.points.emplace_back(Rational(M.b() / (M.d() - M.a())));
    // Derivative at infinity (in the 1/x chart) is d^2.
    bool inf_attracting = M.d() * M.d() < 1;
    out.attracting = inf_attracting ? 0 : 1;
    out.repelling = inf_attracting ? 1 : 0;
    return out;
  }

  if (trace_cmp < 0) {
    out.cls = MapClass::elliptic;
    return out;
  }
  if (trace_cmp == 0) {
    out.cls = MapClass::parabolic;
    out.points.emplace_back(Rational((M.a() - M.d()) / (2 * M.c())));
    return out;
  }
  out.cls = MapClass::hyperbolic;
  // Rational fixed points (square discriminant) need no factoring at all;
  // otherwise t^2 - 4 may be hard to factor whole, but (t-2)(t+2) splits
  // the work.
  Rational disc = t * t - 4;
  Integer dn = disc.get_num(), dd = disc.get_den();
  RealQuadratic root;
  if (mpz_perfect_square_p(dn.get_mpz_t()) &&
      mpz_perfect_square_p(dd.get_mpz_t())) {
    mpz_sqrt(dn.get_mpz_t(), dn.get_mpz_t());
    mpz_sqrt(dd.get_mpz_t(), dd.get_mpz_t());
    root = RealQuadratic(make_rational(dn, dd));
  } else {
    root = RealQuadratic::sqrt_of_product(t - 2, t + 2);
  }
  RealQuadratic two_c = RealQuadratic(Rational(2 * M.c()));
  RealQuadratic diff = RealQuadratic(Rational(M.a() - M.d()));
  RealQuadratic xi_minus = (diff - root) / two_c;
  RealQuadratic xi_plus = (diff + root) / two_c;
  out.points.emplace_back(xi_minus);
  out.points.emplace_back(xi_plus);
  // Multiplier at xi is (c xi + d)^-2 and the two values (t -+ sqrt(t^2-4))/2
  // of c xi + d are reciprocal, so exactly one square exceeds 1.
  RealQuadratic m0 = RealQuadratic(M.c()) * xi_minus + RealQuadratic(M.d());
  bool first_attracting = rq_compare(m0 * m0, RealQuadratic(1)) == Ordering::greater;
  out.attracting = first_attracting ? 0 : 1;
  out.repelling = first_attracting ? 1 : 0;
  return out;
}

bool entries_in_ring(const SL2Matrix& M, const PrimeSet& T) {
  return in_s_integers(M.a(), T) && in_s_integers(M.b(), T) &&
         in_s_integers(M.c(), T) && in_s_integers(M.d(), T);
}

SL2Matrix mob_conjugate(const SL2Matrix& M, const SL2Matrix& g) {
  return g.inverse() * M * g;
}

std::string to_string(const SL2Matrix& M) {
  return "[[" + to_string(M.a()) + "," + to_string(M.b()) + "],[" +
         to_string(M.c()) + "," + to_string(M.d()) + "]]";
}

std::string to_string(const ProjPoint& x) {
  return x.is_infinity() ? "inf" : to_string(x.finite());
}

}  // namespace ppg
