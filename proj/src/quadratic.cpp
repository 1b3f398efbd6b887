#include "ppg/quadratic.hpp"

#include <utility>

namespace ppg {

std::string to_string(Ordering o) {
  switch (o) {
    case Ordering::less: return "less";
    case Ordering::equal: return "equal";
    case Ordering::greater: return "greater";
  }
  throw InternalError("bad ordering value");
}

RealQuadratic::RealQuadratic(Rational rat, Rational coeff, Integer radicand)
    : rat_(std::move(rat)), coeff_(std::move(coeff)), radicand_(std::move(radicand)) {
  if (radicand_ < 0) throw DomainError("negative radicand");
  if (radicand_ > 1 && coeff_ != 0) {
    SquarefreeParts parts = squarefree_decompose(radicand_);
    coeff_ *= parts.square;
    radicand_ = parts.radical;
  }
  if (radicand_ == 1) {
    rat_ += coeff_;
    coeff_ = 0;
  }
  if (coeff_ == 0 || radicand_ == 0) {
    coeff_ = 0;
    radicand_ = 0;
  }
}

RealQuadratic RealQuadratic::sqrt_of(const Rational& q) {
  if (q < 0) throw DomainError("sqrt of negative rational");
  // sqrt(n/m) = sqrt(n*m)/m keeps everything integral under the radical.
  return RealQuadratic(0, make_rational(1, q.get_den()),
                       Integer(q.get_num() * q.get_den()));
}

RealQuadratic RealQuadratic::sqrt_of_product(const Rational& u,
                                             const Rational& v) {
  int s = sgn(u) * sgn(v);
  if (s < 0) throw DomainError("sqrt of negative product");
  if (s == 0) return RealQuadratic();
  // sqrt(u v) = sqrt(|n_u d_u| |n_v d_v|) / (d_u d_v); each |n d| is
  // decomposed on its own and the radicals merged through their gcd.
  SquarefreeParts a = squarefree_decompose(abs(Integer(u.get_num() * u.get_den())));
  SquarefreeParts b = squarefree_decompose(abs(Integer(v.get_num() * v.get_den())));
  Integer g = gcd(a.radical, b.radical);
  RealQuadratic out;
  out.coeff_ = make_rational(a.square * b.square * g,
                             Integer(u.get_den() * v.get_den()));
  out.radicand_ = (a.radical / g) * (b.radical / g);
  if (out.radicand_ == 1) {
    out.rat_ = out.coeff_;
    out.coeff_ = 0;
    out.radicand_ = 0;
  }
  return out;
}

const Rational& RealQuadratic::as_rational() const {
  if (!is_rational()) throw DomainError("value is irrational: " + to_string(*this));
  return rat_;
}

int RealQuadratic::sign() const {
  if (coeff_ == 0) return sgn(rat_);
  if (rat_ == 0) return sgn(coeff_);
  int sr = sgn(rat_), sc = sgn(coeff_);
  if (sr == sc) return sr;
  // Opposite signs: |rat| vs |coeff|*sqrt(d) decides; the two magnitudes are
  // never equal (that would make sqrt(d) rational).
  int cmp = sgn(rat_ * rat_ - coeff_ * coeff_ * radicand_);
  if (cmp == 0) throw InternalError("rational sqrt slipped through canonicalization");
  return sr > 0 ? cmp : -cmp;
}

RealQuadratic RealQuadratic::conjugate() const {
  RealQuadratic out = *this;
  out.coeff_ = -out.coeff_;
  return out;
}

Rational RealQuadratic::norm() const {
  return rat_ * rat_ - coeff_ * coeff_ * radicand_;
}

void RealQuadratic::bracket(unsigned long prec_bits, Rational& lo, Rational& hi) const {
  if (coeff_ == 0) {
    lo = rat_;
    hi = rat_;
    return;
  }
  // s = floor(sqrt(d * 4^prec)); d squarefree >= 2 is never a perfect
  // square, so s/2^p < sqrt(d) < (s+1)/2^p strictly.
  Integer shifted;
  mpz_mul_2exp(shifted.get_mpz_t(), radicand_.get_mpz_t(), 2 * prec_bits);
  Integer s;
  mpz_sqrt(s.get_mpz_t(), shifted.get_mpz_t());
  Integer pow2;
  mpz_ui_pow_ui(pow2.get_mpz_t(), 2, prec_bits);
  Rational root_lo = make_rational(s, pow2);
  Rational root_hi = make_rational(s + 1, pow2);
  if (coeff_ > 0) {
    lo = rat_ + coeff_ * root_lo;
    hi = rat_ + coeff_ * root_hi;
  } else {
    lo = rat_ + coeff_ * root_hi;
    hi = rat_ + coeff_ * root_lo;
  }
}

RealQuadratic RealQuadratic::operator-() const {
  RealQuadratic out = *this;
  out.rat_ = -out.rat_;
  out.coeff_ = -out.coeff_;
  return out;
}

namespace {

// Common radicand for a same-field binary operation.
Integer joint_radicand(const RealQuadratic& a, const RealQuadratic& b) {
  if (a.radicand() == 0) return b.radicand();
  if (b.radicand() == 0 || a.radicand() == b.radicand()) return a.radicand();
  throw FieldMismatchError("distinct radicands " + to_string(a.radicand()) +
                           " and " + to_string(b.radicand()));
}

}  // namespace

RealQuadratic operator+(const RealQuadratic& a, const RealQuadratic& b) {
  Integer d = joint_radicand(a, b);
  return RealQuadratic(a.rat_ + b.rat_, a.coeff_ + b.coeff_, d);
}

RealQuadratic operator-(const RealQuadratic& a, const RealQuadratic& b) {
  return a + (-b);
}

RealQuadratic operator*(const RealQuadratic& a, const RealQuadratic& b) {
  Integer d = joint_radicand(a, b);
  return RealQuadratic(a.rat_ * b.rat_ + a.coeff_ * b.coeff_ * d,
                       a.rat_ * b.coeff_ + a.coeff_ * b.rat_, d);
}

RealQuadratic operator/(const RealQuadratic& a, const RealQuadratic& b) {
  if (b.is_zero()) throw DomainError("division by zero");
  if (b.is_rational()) {
    return RealQuadratic(a.rat_ / b.rat_, a.coeff_ / b.rat_, a.radicand_);
  }
  // Rationalize: a/b = a * conj(b) / norm(b); norm is a nonzero rational.
  return (a * b.conjugate()) / RealQuadratic(b.norm());
}

int rq_sign(const RealQuadratic& x) { return x.sign(); }

Ordering rq_compare(const RealQuadratic& x, const RealQuadratic& y) {
  if (x.radicand() == y.radicand() || x.is_rational() || y.is_rational()) {
    int s = (x - y).sign();
    return s < 0 ? Ordering::less : s > 0 ? Ordering::greater : Ordering::equal;
  }
  // Distinct radicands denote distinct reals; refine brackets until they
  // separate.
  for (unsigned long prec = 64;; prec *= 2) {
    Rational xlo, xhi, ylo, yhi;
    x.bracket(prec, xlo, xhi);
    y.bracket(prec, ylo, yhi);
    if (xhi <= ylo) return Ordering::less;
    if (yhi <= xlo) return Ordering::greater;
  }
}

RealQuadratic rq_field_arith(const RealQuadratic& x, const RealQuadratic& y,
                             char op) {
  switch (op) {
    case '+': return x + y;
    case '-': return x - y;
    case '*': return x * y;
    case '/': return x / y;
  }
  throw DomainError(std::string("unknown operation '") + op + "'");
}

Integer floor_of(const RealQuadratic& x) {
  if (x.is_rational()) {
    Integer q;
    mpz_fdiv_q(q.get_mpz_t(), x.rat().get_num().get_mpz_t(),
               x.rat().get_den().get_mpz_t());
    return q;
  }
  // x is irrational, so the shrinking bracket eventually excludes every
  // integer and both ends share a floor.
  auto rational_floor = [](const Rational& r) {
    Integer q;
    mpz_fdiv_q(q.get_mpz_t(), r.get_num().get_mpz_t(), r.get_den().get_mpz_t());
    return q;
  };
  for (unsigned long prec = 64;; prec *= 2) {
    Rational lo, hi;
    x.bracket(prec, lo, hi);
    Integer flo = rational_floor(lo), fhi = rational_floor(hi);
    if (flo == fhi) return flo;
  }
}

Integer ceil_of(const RealQuadratic& x) { return -floor_of(-x); }

Rational rational_between(const RealQuadratic& a, const RealQuadratic& b) {
  if (rq_compare(a, b) != Ordering::less)
    throw PreconditionError("rational_between needs a < b");
  for (unsigned long prec = 64;; prec *= 2) {
    Rational alo, ahi, blo, bhi;
    a.bracket(prec, alo, ahi);
    b.bracket(prec, blo, bhi);
    if (ahi < blo) return (ahi + blo) / 2;
  }
}

std::string to_string(const RealQuadratic& x) {
  if (x.is_rational()) return to_string(x.rat());
  std::string root = "sqrt(" + to_string(x.radicand()) + ")";
  Rational abs_coeff = abs(x.coeff());
  std::string term = abs_coeff == 1 ? root : to_string(abs_coeff) + "*" + root;
  if (x.rat() == 0) return (x.coeff() < 0 ? "-" : "") + term;
  return to_string(x.rat()) + (x.coeff() < 0 ? "-" : "+") + term;
}

ExtendedReal ExtendedReal::neg_inf() {
  ExtendedReal out;
  out.kind_ = Kind::neg_inf;
  return out;
}

ExtendedReal ExtendedReal::pos_inf() {
  ExtendedReal out;
  out.kind_ = Kind::pos_inf;
  return out;
}

const RealQuadratic& ExtendedReal::finite() const {
  if (!is_finite()) throw DomainError("infinite endpoint has no finite value");
  return value_;
}

Ordering compare(const ExtendedReal& a, const ExtendedReal& b) {
  if (a.is_neg_inf()) return b.is_neg_inf() ? Ordering::equal : Ordering::less;
  if (a.is_pos_inf()) return b.is_pos_inf() ? Ordering::equal : Ordering::greater;
  if (b.is_neg_inf()) return Ordering::greater;
  if (b.is_pos_inf()) return Ordering::less;
  return rq_compare(a.finite(), b.finite());
}

std::string to_string(const ExtendedReal& x) {
  if (x.is_neg_inf()) return "-inf";
  if (x.is_pos_inf()) return "+inf";
  return to_string(x.finite());
}

}  // namespace ppg
