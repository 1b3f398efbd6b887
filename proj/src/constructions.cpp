#include "ppg/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <utility>

namespace ppg {

IntervalSpec IntervalSpec::closed(RealQuadratic u, RealQuadratic v) {
  return IntervalSpec{ExtendedReal(std::move(u)), ExtendedReal(std::move(v)),
                      true, true};
}

IntervalSpec IntervalSpec::open(ExtendedReal u, ExtendedReal v) {
  return IntervalSpec{std::move(u), std::move(v), false, false};
}

bool IntervalSpec::contains(const RealQuadratic& x) const {
  ExtendedReal ex{x};
  Ordering lo_cmp = compare(lo, ex);
  if (!(lo_cmp == Ordering::less || (lo_closed && lo_cmp == Ordering::equal)))
    return false;
  Ordering hi_cmp = compare(ex, hi);
  return hi_cmp == Ordering::less || (hi_closed && hi_cmp == Ordering::equal);
}

std::string to_string(const IntervalSpec& I) {
  return (I.lo_closed ? "[" : "(") + to_string(I.lo) + "," + to_string(I.hi) +
         (I.hi_closed ? "]" : ")");
}

namespace {

void check(bool ok, const std::string& what) {
  if (!ok) throw Error("check failed: " + what);
}

RealQuadratic mob_value(const SL2Matrix& M, const RealQuadratic& x) {
  ProjPoint y = mob_apply(M, ProjPoint(x));
  if (y.is_infinity())
    throw PreconditionError("matrix pole hit at " + to_string(x));
  return y.finite();
}

Rational mob_value(const SL2Matrix& M, const Rational& x) {
  Rational den = M.c() * x + M.d();
  if (den == 0) throw PreconditionError("matrix pole hit at " + to_string(x));
  return (M.a() * x + M.b()) / den;
}

/// Rational strictly above / below a point, without leaving the field.
Rational rational_above_point(const RealQuadratic& a) {
  if (a.is_rational()) return a.rat() + 1;
  Integer f = floor_of(a) + 1;
  return Rational(f);
}

Rational rational_below_point(const RealQuadratic& a) {
  if (a.is_rational()) return a.rat() - 1;
  Integer f = floor_of(a);
  return Rational(f);
}

double to_double(const RealQuadratic& x) {
  double out = mpq_get_d(x.rat().get_mpq_t());
  if (!x.is_rational())
    out += mpq_get_d(x.coeff().get_mpq_t()) *
           std::sqrt(mpz_get_d(x.radicand().get_mpz_t()));
  return out;
}

struct WindowApprox {
  double lo, hi;
};

WindowApprox approximate(const IntervalSpec& W) {
  WindowApprox out{-HUGE_VAL, HUGE_VAL};
  if (W.lo.is_finite()) out.lo = to_double(W.lo.finite());
  if (W.hi.is_finite()) out.hi = to_double(W.hi.finite());
  return out;
}

bool roughly_inside(double x, const WindowApprox& w) {
  double margin = 1e-6 * (1.0 + std::fabs(x));
  return x >= w.lo - margin && x <= w.hi + margin;
}

/// Up to `count` rationals with denominator a power of p strictly inside the
/// window, spread around its middle. The grid starts at the coarsest power
/// that fits and deepens with extra_depth. Window ends are resolved through
/// rational brackets, so irrational endpoints never force cross-field
/// arithmetic here; the strict compares against the bracket ends keep every
/// pin strictly interior.
std::vector<Rational> p_adic_inside(const IntervalSpec& W, const Integer& p,
                                    long extra_depth, int count) {
  Rational L, H;
  for (unsigned long bits = 64;; bits *= 2) {
    if (bits > (1u << 24)) return {};
    Rational drop;
    if (W.lo.is_finite()) W.lo.finite().bracket(bits, drop, L);
    if (W.hi.is_finite()) W.hi.finite().bracket(bits, H, drop);
    if (W.lo.is_finite() && W.hi.is_finite()) {
      if (L < H) break;
    } else if (W.lo.is_finite()) {
      H = L + 1;
      break;
    } else if (W.hi.is_finite()) {
      L = H - 1;
      break;
    } else {
      L = 0;
      H = 1;
      break;
    }
  }
  Rational width = H - L;
  Integer pm = 1;
  while (pm * width.get_num() <= (count + 1) * width.get_den()) pm *= p;
  for (long i = 0; i < extra_depth; ++i) pm *= p;
  Rational mid = (L + H) / 2;
  Integer scaled = mid.get_num() * pm;
  Integer bm;
  mpz_fdiv_q(bm.get_mpz_t(), scaled.get_mpz_t(), mid.get_den().get_mpz_t());
  std::vector<Rational> out;
  for (long off : {0L, 1L, -1L, 2L, -2L}) {
    if (static_cast<int>(out.size()) >= count) break;
    Rational pin = make_rational(bm + off, pm);
    if (L < pin && pin < H) out.push_back(pin);
  }
  return out;
}

/// Hyperbolic with repelling fixed point r, attracting fixed point att and
/// multiplier p^(2j):
///   [[p^j + r c, -r att c], [c, 1/p^j - r c]],  c = (p^j - 1/p^j)/(att - r).
/// Its discriminant (p^j - 1/p^j)^2 is a rational square, its pole
/// r - (att - r)/(p^(2j) - 1) sits on the far side of r from att, and the
/// entries lie in Z[1/p] whenever the p-free part of num(att - r) divides
/// p^(2j) - 1; callers arrange that divisibility.
SL2Matrix pinned_hyperbolic(const Rational& r, const Rational& att,
                            const Integer& p, long j) {
  Integer pj = 1;
  for (long i = 0; i < j; ++i) pj *= p;
  Rational lam{pj};
  Rational chat = (lam - make_rational(1, pj)) / (att - r);
  return SL2Matrix(lam + r * chat, -r * att * chat, chat,
                   make_rational(1, pj) - r * chat);
}

struct HyperbolicParts {
  RealQuadratic repelling;
  RealQuadratic attracting;
};

std::optional<HyperbolicParts> hyperbolic_parts(const SL2Matrix& M) {
  FixedPointData fp = mob_fixed_points(M);
  if (fp.cls != MapClass::hyperbolic || M.is_affine()) return std::nullopt;
  HyperbolicParts out{fp.points[*fp.repelling].finite(),
                      fp.points[*fp.attracting].finite()};
  return out;
}

}  // namespace

SL2Matrix find_hyperbolic_matching(
    const IntervalSpec& window_repelling, const IntervalSpec& window_attracting,
    const PrimeSet& T, const SearchBudget& budget,
    const std::function<bool(const SL2Matrix&, const RealQuadratic&,
                             const RealQuadratic&)>& accept) {
  if (!window_repelling.valid() || !window_attracting.valid())
    throw PreconditionError("fixed-point windows must be nonempty intervals");
  // Open windows must be disjoint: max of lows < min of highs means overlap.
  const ExtendedReal& lo_max =
      compare(window_repelling.lo, window_attracting.lo) == Ordering::less
          ? window_attracting.lo
          : window_repelling.lo;
  const ExtendedReal& hi_min =
      compare(window_repelling.hi, window_attracting.hi) == Ordering::less
          ? window_repelling.hi
          : window_attracting.hi;
  if (compare(lo_max, hi_min) == Ordering::less)
    throw PreconditionError("fixed-point windows overlap");

  WindowApprox rep_box = approximate(window_repelling);
  WindowApprox att_box = approximate(window_attracting);

  // Position of w against the two (numerically ordered) fixed points of M,
  // decided by sign arithmetic alone: 0 below the smaller root, 1 equal to
  // it, 2 strictly between, 3 equal to the larger root, 4 above. Keeping the
  // radicals out of the rejection path matters in the targeted phase, where
  // discriminants grow with the squared strength.
  auto root_ordinal = [](const SL2Matrix& M, const ExtendedReal& w,
                         bool low_end) -> int {
    if (!w.is_finite()) return low_end ? 0 : 4;
    const RealQuadratic& x = w.finite();
    RealQuadratic phi = RealQuadratic(M.c()) * x * x +
                        RealQuadratic(M.d() - M.a()) * x +
                        RealQuadratic(-M.b());
    int s = rq_sign(phi) * sgn(M.c());
    // Both roots straddle the vertex of the parabola.
    bool below_vertex =
        rq_compare(x, RealQuadratic(Rational(M.a() - M.d()) / (2 * M.c()))) ==
        Ordering::less;
    if (s == 0) return below_vertex ? 1 : 3;
    if (s > 0) return below_vertex ? 0 : 4;
    return 2;
  };

  auto window_admits = [&](const SL2Matrix& M) -> bool {
    auto larger_in = [&](const IntervalSpec& W) {
      int lo = root_ordinal(M, W.lo, true);
      int hi = root_ordinal(M, W.hi, false);
      return (lo <= 2 || (lo == 3 && W.lo_closed)) &&
             (hi == 4 || (hi == 3 && W.hi_closed));
    };
    auto smaller_in = [&](const IntervalSpec& W) {
      int lo = root_ordinal(M, W.lo, true);
      int hi = root_ordinal(M, W.hi, false);
      return (lo == 0 || (lo == 1 && W.lo_closed)) &&
             (hi >= 2 || (hi == 1 && W.hi_closed));
    };
    // Trace > 2 makes the "+" branch attracting; c's sign says whether that
    // branch is the numerically larger root.
    bool att_is_larger = (M.trace() > 2) == (M.c() > 0);
    if (att_is_larger)
      return larger_in(window_attracting) && smaller_in(window_repelling);
    return smaller_in(window_attracting) && larger_in(window_repelling);
  };

  auto try_exact = [&](const SL2Matrix& cand) -> bool {
    Rational tr = cand.trace();
    if (cand.is_affine() || (tr <= 2 && tr >= -2)) return false;
    if (!window_admits(cand)) return false;
    std::optional<HyperbolicParts> parts = hyperbolic_parts(cand);
    if (!parts) return false;
    // The radical form must agree with the sign tests.
    if (!window_repelling.contains(parts->repelling) ||
        !window_attracting.contains(parts->attracting))
      throw InternalError("fixed-point window tests disagree");
    return accept(cand, parts->repelling, parts->attracting);
  };

  // Phase 1: exhaustive enumeration by max-entry bound. Entries fit in long.
  for (long B = 1; B <= budget.brute_entry_bound; B *= 2) {
    long seen = B / 2;
    for (long a = -B; a <= B; ++a) {
      for (long d = -B; d <= B; ++d) {
        long tr = a + d;
        if (tr <= 2 && tr >= -2) continue;
        for (long c = -B; c <= B; ++c) {
          if (c == 0) continue;
          long ad1 = a * d - 1;
          if (ad1 % c != 0) continue;
          long b = ad1 / c;
          long maxe = std::max(std::max(std::labs(a), std::labs(b)),
                               std::max(std::labs(c), std::labs(d)));
          if (maxe > B || maxe <= seen) continue;
          // Cheap double check before exact fixed-point work.
          double sq = std::sqrt(static_cast<double>(tr) * tr - 4);
          double rp = (static_cast<double>(a) - d + sq) / (2.0 * c);
          double rm = (static_cast<double>(a) - d - sq) / (2.0 * c);
          double base_p = (tr + sq) / 2.0;  // c xi + d at the "+" root
          double att = std::fabs(base_p) > 1 ? rp : rm;
          double rep = std::fabs(base_p) > 1 ? rm : rp;
          if (!roughly_inside(rep, rep_box) || !roughly_inside(att, att_box))
            continue;
          SL2Matrix cand{Rational(a), Rational(b), Rational(c), Rational(d)};
          if (try_exact(cand)) return cand;
        }
      }
    }
  }

  // Phase 2: hyperbolics with both fixed points rational. The repelling
  // point is pinned at a p-power denominator for p in T and the attracting
  // point is placed at distance (p^(2j) - 1) p^sigma from it; the p-free
  // part of that step divides p^(2j) - 1, so pinned_hyperbolic stays in
  // SL2(Z[1/T]), and the square discriminant keeps all downstream work
  // rational. The step ladder is log-dense at ratio p: it always reaches
  // into an unbounded attracting window, and into any bounded one whose
  // ends are at least a factor p apart. Pins deepen and the multiplier
  // exponent grows with the level.
  if (!T.empty()) {
    bool att_right =
        compare(window_repelling.hi, window_attracting.lo) != Ordering::greater;
    for (long lvl = 0; lvl <= budget.targeted_doublings; ++lvl) {
      long j_cap = 6 + 2 * lvl;
      for (const Integer& p : T.primes()) {
        Rational p_r{p};
        for (const Rational& r : p_adic_inside(window_repelling, p, lvl, 3)) {
          // Distance from r to the near end of the attracting window;
          // positive because r is strictly inside the other window.
          RealQuadratic gap =
              att_right ? window_attracting.lo.finite() - RealQuadratic(r)
                        : RealQuadratic(r) - window_attracting.hi.finite();
          Integer pj = 1;
          for (long j = 1; j <= j_cap; ++j) {
            pj *= p;
            Rational base{pj * pj - 1};
            Rational pwr{1};
            while (rq_compare(RealQuadratic(base * pwr), gap) ==
                   Ordering::greater)
              pwr /= p_r;
            while (rq_compare(RealQuadratic(base * pwr), gap) !=
                   Ordering::greater)
              pwr *= p_r;
            for (int probes = 0; probes < 3; ++probes, pwr *= p_r) {
              Rational att = att_right ? Rational(r + base * pwr)
                                       : Rational(r - base * pwr);
              if (!window_attracting.contains(RealQuadratic(att))) continue;
              SL2Matrix cand = pinned_hyperbolic(r, att, p, j);
              if (!entries_in_ring(cand, T))
                throw InternalError("pinned candidate left the ring");
              if (try_exact(cand)) return cand;
            }
          }
        }
      }
    }
  }
  throw BudgetExhaustedError("no admissible hyperbolic element within budget",
                             budget.targeted_doublings);
}

SL2Matrix find_hyperbolic(const IntervalSpec& window_repelling,
                          const IntervalSpec& window_attracting,
                          const PrimeSet& T, const SearchBudget& budget) {
  return find_hyperbolic_matching(
      window_repelling, window_attracting, T, budget,
      [](const SL2Matrix&, const RealQuadratic&, const RealQuadratic&) {
        return true;
      });
}

namespace {

SL2Matrix reflect(const SL2Matrix& M) {
  return SL2Matrix(M.a(), -M.b(), -M.c(), M.d());
}

ExtendedReal reflect(const ExtendedReal& x) {
  if (x.is_neg_inf()) return ExtendedReal::pos_inf();
  if (x.is_pos_inf()) return ExtendedReal::neg_inf();
  return ExtendedReal(-x.finite());
}

std::vector<Piece> reflect(const std::vector<Piece>& pieces) {
  std::vector<Piece> out;
  out.reserve(pieces.size());
  for (auto it = pieces.rbegin(); it != pieces.rend(); ++it)
    out.push_back(Piece{reflect(it->hi), reflect(it->lo), reflect(it->matrix)});
  return out;
}

bool pole_outside(const SL2Matrix& M, const RealQuadratic& lo,
                  const RealQuadratic& hi) {
  std::optional<Rational> pole = M.pole();
  if (!pole) return true;
  RealQuadratic p{*pole};
  return rq_compare(p, lo) == Ordering::less ||
         rq_compare(p, hi) == Ordering::greater;
}

/// Least k >= 1 with q^k x0 beyond `target` in direction `up`, by iterating
/// the exact Moebius action. Returns 0 when the cap is passed.
long overtaking_power(const SL2Matrix& q, const RealQuadratic& x0,
                      const RealQuadratic& target, bool up, long cap) {
  RealQuadratic y = x0;
  for (long k = 1; k <= cap; ++k) {
    y = mob_value(q, y);
    Ordering o = rq_compare(y, target);
    if (up ? o == Ordering::greater : o == Ordering::less) return k;
  }
  return 0;
}

/// The crossing point lives in the field of disc(h0^-1 Q), factored through
/// its halves trace -+ 2. Candidates whose halves resist a bounded factoring
/// effort are declined and the search proposes another; the bound only
/// shapes which q wins, never the correctness of what is built from it.
bool crossing_field_tractable(const SL2Matrix& h0, const SL2Matrix& Q) {
  constexpr long kFactorEffort = 300000;
  SL2Matrix M = h0.inverse() * Q;
  if (M.is_affine()) return true;
  Rational tr = M.trace();
  for (const Rational& part : {Rational(tr - 2), Rational(tr + 2)}) {
    if (part == 0) continue;
    Integer n = abs(Integer(part.get_num() * part.get_den()));
    if (!try_squarefree_decompose(n, kFactorEffort)) return false;
  }
  return true;
}

/// The crossing point: a fixed point of h0^-1 q^k strictly inside `window`,
/// smallest first for determinism.
RealQuadratic crossing_point(const SL2Matrix& h0, const SL2Matrix& Q,
                             const IntervalSpec& window) {
  SL2Matrix M = h0.inverse() * Q;
  FixedPointData fp = mob_fixed_points(M);
  std::optional<RealQuadratic> best;
  for (const ProjPoint& pt : fp.points) {
    if (pt.is_infinity() || !window.contains(pt.finite())) continue;
    if (!best || rq_compare(pt.finite(), *best) == Ordering::less)
      best = pt.finite();
  }
  if (!best)
    throw InternalError("no crossing point in " + to_string(window) +
                        " for " + to_string(M));
  return *best;
}

/// Builds the tail of the extension to the right of v, in this frame. T is
/// the ring the spliced pieces must stay in.
std::pair<std::vector<Piece>, TailRecord> tail_right(const SL2Matrix& h0,
                                                     const RealQuadratic& v,
                                                     const PrimeSet& T,
                                                     const SearchBudget& budget) {
  TailRecord rec;
  RealQuadratic w = mob_value(h0, v);
  Ordering cmp = rq_compare(w, v);
  if (cmp == Ordering::equal) {
    std::vector<Piece> pieces{
        Piece{ExtendedReal(v), ExtendedReal::pos_inf(), SL2Matrix::identity()}};
    return {std::move(pieces), rec};
  }
  rec.moved = true;
  rec.downward = cmp == Ordering::less;

  // Probe x > v, shrunk toward v until the piece of line it cuts off is
  // pole-free and (downward case) h0 x has come back below v.
  Rational x = rec.downward ? rational_above_point(v) : rational_between(v, w);
  for (long step = 0;; ++step) {
    if (step > budget.max_shrink_steps)
      throw BudgetExhaustedError("probe selection did not stabilize",
                                 budget.max_shrink_steps);
    if (pole_outside(h0, v, RealQuadratic(x))) {
      if (!rec.downward) break;
      if (rq_compare(mob_value(h0, RealQuadratic(x)), v) == Ordering::less)
        break;
    }
    x = rational_between(v, RealQuadratic(x));
  }
  rec.x = x;
  RealQuadratic hx = mob_value(h0, RealQuadratic(x));

  IntervalSpec window_rep = IntervalSpec::open(ExtendedReal(v), ExtendedReal(RealQuadratic(x)));
  IntervalSpec window_att =
      rec.downward
          ? IntervalSpec::open(ExtendedReal::neg_inf(), ExtendedReal(w))
          : IntervalSpec::open(ExtendedReal(hx), ExtendedReal::pos_inf());

  // The overtaking test runs at the rational probe x going up, and at v
  // itself going down.
  const RealQuadratic& start = rec.downward ? v : RealQuadratic(x);
  const RealQuadratic& target = rec.downward ? w : hx;
  rec.q = find_hyperbolic_matching(
      window_rep, window_att, T, budget,
      [&](const SL2Matrix& q, const RealQuadratic& rep,
          const RealQuadratic& att) {
        long k = overtaking_power(q, start, target, !rec.downward,
                                  budget.max_power);
        if (k == 0) return false;
        if (!crossing_field_tractable(h0, q.pow(k))) return false;
        rec.k = k;
        rec.xi_minus = rep;
        rec.xi_plus = att;
        return true;
      });

  SL2Matrix Q = rec.q.pow(rec.k);
  IntervalSpec crossing_window =
      rec.downward
          ? IntervalSpec::open(ExtendedReal(v), ExtendedReal(rec.xi_minus))
          : IntervalSpec::open(ExtendedReal(rec.xi_minus),
                               ExtendedReal(RealQuadratic(x)));
  rec.t = crossing_point(h0, Q, crossing_window);

  // Going up the splice lands on the attracting fixed point; going down the
  // tail rides q only as far as the repelling one.
  const RealQuadratic& splice = rec.downward ? rec.xi_minus : rec.xi_plus;
  std::vector<Piece> pieces{
      Piece{ExtendedReal(v), ExtendedReal(rec.t), h0},
      Piece{ExtendedReal(rec.t), ExtendedReal(splice), Q},
      Piece{ExtendedReal(splice), ExtendedReal::pos_inf(), SL2Matrix::identity()}};
  return {std::move(pieces), rec};
}

std::vector<Piece> rebuild_side(const TailRecord& rec, const SL2Matrix& h0,
                                const RealQuadratic& v) {
  if (!rec.moved) {
    return {Piece{ExtendedReal(v), ExtendedReal::pos_inf(), SL2Matrix::identity()}};
  }
  SL2Matrix Q = rec.q.pow(rec.k);
  const RealQuadratic& splice = rec.downward ? rec.xi_minus : rec.xi_plus;
  return {Piece{ExtendedReal(v), ExtendedReal(rec.t), h0},
          Piece{ExtendedReal(rec.t), ExtendedReal(splice), Q},
          Piece{ExtendedReal(splice), ExtendedReal::pos_inf(), SL2Matrix::identity()}};
}

void validate_side(const TailRecord& rec, const SL2Matrix& h0,
                   const RealQuadratic& v, const SearchBudget& budget) {
  RealQuadratic w = mob_value(h0, v);
  if (!rec.moved) {
    check(rq_compare(w, v) == Ordering::equal, "identity tail needs a fixed endpoint");
    return;
  }
  Ordering cmp = rq_compare(w, v);
  check(cmp != Ordering::equal, "moved tail with fixed endpoint");
  check(rec.downward == (cmp == Ordering::less), "direction flag mismatch");

  RealQuadratic xq{rec.x};
  check(rq_compare(xq, v) == Ordering::greater, "probe left of endpoint");
  check(pole_outside(h0, v, xq), "pole inside probe interval");
  RealQuadratic hx = mob_value(h0, xq);
  if (rec.downward) {
    check(rq_compare(hx, v) == Ordering::less, "downward probe image above v");
  } else {
    check(rq_compare(xq, w) == Ordering::less, "upward probe beyond h0 v");
  }

  std::optional<HyperbolicParts> parts = hyperbolic_parts(rec.q);
  check(parts.has_value(), "recorded q is not hyperbolic");
  check(parts->repelling == rec.xi_minus && parts->attracting == rec.xi_plus,
        "recorded fixed points differ from q's");
  check(IntervalSpec::open(ExtendedReal(v), ExtendedReal(xq)).contains(rec.xi_minus),
        "repelling point outside its window");
  if (rec.downward) {
    check(rq_compare(rec.xi_plus, w) == Ordering::less,
          "attracting point not below h0 v");
  } else {
    check(rq_compare(rec.xi_plus, hx) == Ordering::greater,
          "attracting point not beyond h0 x");
  }

  const RealQuadratic& start = rec.downward ? v : xq;
  const RealQuadratic& target = rec.downward ? w : hx;
  long k = overtaking_power(rec.q, start, target, !rec.downward, budget.max_power);
  check(k == rec.k, "recorded power is not the least overtaking power");

  SL2Matrix Q = rec.q.pow(rec.k);
  check(mob_value(Q, rec.t) == mob_value(h0, rec.t), "crossing point mismatch");
  IntervalSpec window =
      rec.downward
          ? IntervalSpec::open(ExtendedReal(v), ExtendedReal(rec.xi_minus))
          : IntervalSpec::open(ExtendedReal(rec.xi_minus), ExtendedReal(xq));
  check(window.contains(rec.t), "crossing point outside its window");
}

void require_compact_domain(const IntervalSpec& I, const char* who) {
  if (!I.valid() || !I.is_compact() || !I.lo_closed || !I.hi_closed)
    throw PreconditionError(std::string(who) +
                            " needs a compact closed interval, got " +
                            to_string(I));
}

}  // namespace

PPMap LemmaTrace::rebuild() const {
  const RealQuadratic& u = interval.lo.finite();
  const RealQuadratic& v = interval.hi.finite();
  std::vector<Piece> pieces = reflect(rebuild_side(left, reflect(h0), -u));
  pieces.push_back(Piece{interval.lo, interval.hi, h0});
  std::vector<Piece> right_pieces = rebuild_side(right, h0, v);
  pieces.insert(pieces.end(), right_pieces.begin(), right_pieces.end());
  return pp_make(std::move(pieces));
}

void LemmaTrace::validate() const {
  require_compact_domain(interval, "trace interval");
  const RealQuadratic& u = interval.lo.finite();
  const RealQuadratic& v = interval.hi.finite();
  check(pole_outside(h0, u, v), "pole of h0 inside the interval");
  check(!left.moved || left.reflected, "left record not marked reflected");
  check(!right.reflected, "right record marked reflected");
  SearchBudget budget;
  validate_side(right, h0, v, budget);
  validate_side(left, reflect(h0), -u, budget);
  check(pp_equals(rebuild(), result), "rebuilt map differs from the result");
}

std::pair<PPMap, LemmaTrace> extend_on_interval(const SL2Matrix& h0,
                                                const IntervalSpec& I,
                                                const PrimeSet& T,
                                                const SearchBudget& budget) {
  require_compact_domain(I, "extend_on_interval");
  if (!entries_in_ring(h0, T))
    throw PreconditionError("matrix " + to_string(h0) +
                            " has entries outside Z[1/{" + T.str() + "}]");
  const RealQuadratic& u = I.lo.finite();
  const RealQuadratic& v = I.hi.finite();
  if (!pole_outside(h0, u, v))
    throw PreconditionError("pole of " + to_string(h0) + " meets " + to_string(I));

  auto [right_pieces, right_rec] = tail_right(h0, v, T, budget);
  auto [left_raw, left_rec] = tail_right(reflect(h0), -u, T, budget);
  left_rec.reflected = true;

  std::vector<Piece> pieces = reflect(left_raw);
  pieces.push_back(Piece{I.lo, I.hi, h0});
  pieces.insert(pieces.end(), right_pieces.begin(), right_pieces.end());

  LemmaTrace trace;
  trace.h0 = h0;
  trace.interval = I;
  trace.right = std::move(right_rec);
  trace.left = std::move(left_rec);
  trace.result = pp_make(std::move(pieces));
  return {trace.result, std::move(trace)};
}

std::pair<PPMap, LemmaTrace> displace_off(const IntervalSpec& J,
                                          const PrimeSet& T,
                                          const SearchBudget& budget) {
  require_compact_domain(J, "displace_off");
  Integer lo_i = floor_of(J.lo.finite());
  Integer hi_i = floor_of(J.hi.finite()) + 1;
  Integer m = hi_i - lo_i + 1;  // strictly more than the hull length
  SL2Matrix b0{1, Rational(m), 0, 1};
  IntervalSpec hull = IntervalSpec::closed(RealQuadratic(Rational(lo_i)),
                                           RealQuadratic(Rational(hi_i)));
  auto [b1, trace] = extend_on_interval(b0, hull, T, budget);

  PPMap b1_inv = pp_invert(b1);
  RealQuadratic im_lo = pp_eval(b1_inv, J.lo.finite());
  RealQuadratic im_hi = pp_eval(b1_inv, J.hi.finite());
  if (!(rq_compare(im_hi, J.lo.finite()) == Ordering::less ||
        rq_compare(im_lo, J.hi.finite()) == Ordering::greater))
    throw InternalError("displacement failed to clear the interval");
  return {std::move(b1), std::move(trace)};
}

void CommutatorCertificate::validate() const {
  check(pp_equals(pp_commutator(h1, b1), h), "h is not the recorded commutator");
  check(pp_support(h1).compact, "h1 is not compactly supported");
  check(pp_support(b1).compact, "b1 is not compactly supported");
  check(pp_in_subgroup(h1, ring), "h1 leaves the ring");
  check(pp_in_subgroup(b1, ring), "b1 leaves the ring");
  check(pp_in_subgroup(h, ring), "h leaves the ring");
}

std::pair<PPMap, CommutatorCertificate> lemma_element(const SL2Matrix& h0,
                                                      const IntervalSpec& I,
                                                      const PrimeSet& T,
                                                      const SearchBudget& budget) {
  auto [h1, trace] = extend_on_interval(h0, I, T, budget);
  CommutatorCertificate cert;
  cert.ring = T;
  cert.h1 = h1;
  if (h1.is_identity()) {
    cert.b1 = PPMap::identity();
    cert.h = PPMap::identity();
    return {cert.h, std::move(cert)};
  }
  SupportInterval supp = pp_support(h1);
  if (!supp.compact) throw InternalError("extension is not compactly supported");
  const ExtendedReal& lo =
      compare(I.lo, supp.lo) == Ordering::less ? I.lo : supp.lo;
  const ExtendedReal& hi =
      compare(I.hi, supp.hi) == Ordering::greater ? I.hi : supp.hi;
  IntervalSpec J = IntervalSpec::closed(lo.finite(), hi.finite());
  auto [b1, btrace] = displace_off(J, T, budget);
  cert.b1 = std::move(b1);
  cert.h = pp_commutator(cert.h1, cert.b1);
  cert.validate();
  return {cert.h, std::move(cert)};
}

namespace {

SL2Matrix unipotent_seed(const Integer& q, long n, bool lower) {
  Integer qn;
  mpz_pow_ui(qn.get_mpz_t(), q.get_mpz_t(), static_cast<unsigned long>(n));
  Rational s = make_rational(1, qn);
  if (lower) return SL2Matrix(1, 0, s, 1);
  return SL2Matrix(1, s, 0, 1);
}

/// h0 I inside the open interval (lo, hi)?
bool maps_strictly_inside(const SL2Matrix& h0, const IntervalSpec& I,
                          const Rational& lo, const Rational& hi) {
  if (!pole_outside(h0, I.lo.finite(), I.hi.finite())) return false;
  RealQuadratic im_lo = mob_value(h0, I.lo.finite());
  RealQuadratic im_hi = mob_value(h0, I.hi.finite());
  return rq_compare(RealQuadratic(lo), im_lo) == Ordering::less &&
         rq_compare(im_hi, RealQuadratic(hi)) == Ordering::less;
}

}  // namespace

CommensurationWitness commensuration_witness(const PPMap& g, const PrimeSet& S,
                                             const PrimeSet& T,
                                             const SearchBudget& budget,
                                             const std::optional<Integer>& pinned_p) {
  if (T.empty()) throw PreconditionError("T must be nonempty");
  if (!T.subset_of(S) || T == S)
    throw PreconditionError("T must be a proper subset of S");
  if (!pp_in_subgroup(g, S))
    throw PreconditionError("g has entries outside Z[1/{" + S.str() + "}]");
  if (pp_in_subgroup(g, T))
    throw PreconditionError("g already lies in the T-subgroup; nothing to witness");

  std::vector<Integer> candidates;
  if (pinned_p) {
    if (!S.contains(*pinned_p) || T.contains(*pinned_p))
      throw PreconditionError("pinned prime must lie in S \\ T");
    candidates.push_back(*pinned_p);
  } else {
    candidates = S.set_difference(T).primes();
  }

  const Piece* found_piece = nullptr;
  char entry_name = 0;
  Integer p;
  for (const Integer& cand : candidates) {
    for (const Piece& piece : g.pieces()) {
      const Rational entries[4] = {piece.matrix.a(), piece.matrix.b(),
                                   piece.matrix.c(), piece.matrix.d()};
      for (int i = 0; i < 4; ++i) {
        if (entries[i] != 0 && valuation(entries[i], cand) < 0) {
          found_piece = &piece;
          entry_name = static_cast<char>('a' + i);
          p = cand;
          break;
        }
      }
      if (found_piece) break;
    }
    if (found_piece) break;
  }
  if (!found_piece)
    throw PreconditionError("no entry of g has a negative valuation at an allowed prime");

  // Compact rational subinterval of the witnessing piece.
  Rational alpha, beta;
  if (!found_piece->lo.is_finite() && !found_piece->hi.is_finite()) {
    alpha = 0;
    beta = 1;
  } else if (!found_piece->lo.is_finite()) {
    beta = rational_below_point(found_piece->hi.finite());
    alpha = beta - 1;
  } else if (!found_piece->hi.is_finite()) {
    alpha = rational_above_point(found_piece->lo.finite());
    beta = alpha + 1;
  } else {
    alpha = rational_between(found_piece->lo.finite(), found_piece->hi.finite());
    beta = rational_between(RealQuadratic(alpha), found_piece->hi.finite());
  }

  const SL2Matrix& M = found_piece->matrix;
  Rational g_alpha = mob_value(M, alpha);
  Rational g_beta = mob_value(M, beta);
  Rational third = (g_beta - g_alpha) / 3;
  IntervalSpec I = IntervalSpec::closed(RealQuadratic(g_alpha + third),
                                        RealQuadratic(g_beta - third));

  Integer q = T.smallest();
  bool lower = entry_name == 'a' || entry_name == 'b';
  long n = 0;
  {
    long probe = 1;
    for (long e = 0; e <= budget.max_inclusion_doublings; ++e, probe *= 2) {
      if (maps_strictly_inside(unipotent_seed(q, probe, lower), I, g_alpha, g_beta)) {
        n = probe;
        break;
      }
    }
    if (n == 0)
      throw BudgetExhaustedError("unipotent seed never settled inside the image",
                                 budget.max_inclusion_doublings);
    // Walk back to the least workable exponent to keep coefficients large
    // and the downstream fixed-point windows wide.
    long lo_n = n / 2 + 1, hi_n = n;
    while (lo_n < hi_n) {
      long mid = lo_n + (hi_n - lo_n) / 2;
      if (maps_strictly_inside(unipotent_seed(q, mid, lower), I, g_alpha, g_beta))
        hi_n = mid;
      else
        lo_n = mid + 1;
    }
    n = lo_n;
  }

  SL2Matrix h0 = unipotent_seed(q, n, lower);
  auto [h, cert] = lemma_element(h0, I, T, budget);

  CommensurationWitness out;
  out.h = std::move(h);
  out.certificate = std::move(cert);
  out.local_conjugate = mob_conjugate(h0, M);
  out.p = p;
  out.q = q;
  out.n = n;
  out.offending_entry = entry_name;
  out.piece_matrix = M;
  out.piece_interval = IntervalSpec{found_piece->lo, found_piece->hi,
                                    found_piece->lo.is_finite(),
                                    found_piece->hi.is_finite()};
  out.inner_interval = I;

  if (!pp_in_subgroup(out.h, T))
    throw InternalError("witness element left the T-subgroup");
  PPMap conj = pp_compose(pp_compose(pp_invert(g), out.h), g);
  if (pp_in_subgroup(conj, T))
    throw InternalError("conjugated witness stayed in the T-subgroup");
  return out;
}

SL2Matrix unconfinement_matrix(const Integer& p, long n) {
  if (!is_prime(p)) throw DomainError("p must be prime");
  if (n < 1) throw DomainError("n must be positive");
  Integer pn;
  mpz_pow_ui(pn.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(n));
  return SL2Matrix(Rational(pn), make_rational(1, pn * pn), 0,
                   make_rational(1, pn));
}

PPMap unconfinement_element(const Integer& p, long n) {
  return pp_make({Piece{ExtendedReal::neg_inf(), ExtendedReal::pos_inf(),
                        unconfinement_matrix(p, n)}});
}

Rational conjugate_top_right(const SL2Matrix& hI, const Integer& p, long n) {
  if (!is_prime(p)) throw DomainError("p must be prime");
  if (n < 1) throw DomainError("n must be positive");
  Integer pn;
  mpz_pow_ui(pn.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(n));
  Rational p2 = make_rational(1, pn * pn);
  Rational p3 = make_rational(1, pn * pn * pn);
  Rational p4 = make_rational(1, pn * pn * pn * pn);
  Rational closed = hI.b() * p2 + (hI.a() - hI.d()) * p3 - hI.c() * p4;

  // Independent route: the raw triple product, with no normalization.
  Rational gi[4] = {make_rational(1, pn), -p2, 0, Rational(pn)};
  Rational hg_top = hI.a() * p2 + hI.b() * make_rational(1, pn);
  Rational hg_bot = hI.c() * p2 + hI.d() * make_rational(1, pn);
  Rational raw = gi[0] * hg_top + gi[1] * hg_bot;
  if (raw != closed)
    throw InternalError("closed form disagrees with the matrix product");
  return closed;
}

namespace {

std::pair<const Piece*, const SL2Matrix*> witness_piece(const PPMap& h) {
  for (const Piece& piece : h.pieces()) {
    if (!piece.matrix.is_identity()) return {&piece, &piece.matrix};
  }
  throw PreconditionError("element is trivial; nothing escapes");
}

long floordiv(long a, long b) {
  long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

/// Least N with v_p(top right of the conjugate) < 0 for all n >= N.
long escape_threshold(const SL2Matrix& hI, const Integer& p) {
  Rational b = hI.b();
  Rational amd = hI.a() - hI.d();
  Rational c = hI.c();
  std::optional<long> beta, delta, gamma;
  if (b != 0) beta = valuation(b, p);
  if (amd != 0) delta = valuation(amd, p);
  if (c != 0) gamma = valuation(c, p);
  if (!beta && !delta && !gamma)
    throw PreconditionError("matrix acts as the identity");

  // Beyond every pairwise tie of the slopes -2, -3, -4 the minimum term is
  // unique, so the sum's valuation is that minimum; force it negative too.
  long n0 = 1;
  if (beta && delta) n0 = std::max(n0, *delta - *beta + 1);
  if (beta && gamma) n0 = std::max(n0, floordiv(*gamma - *beta, 2) + 1);
  if (delta && gamma) n0 = std::max(n0, *gamma - *delta + 1);
  if (gamma)
    n0 = std::max(n0, floordiv(*gamma, 4) + 1);
  else if (delta)
    n0 = std::max(n0, floordiv(*delta, 3) + 1);
  else
    n0 = std::max(n0, floordiv(*beta, 2) + 1);

  long last_bad = 0;
  for (long n = 1; n < n0; ++n) {
    Rational ctr = conjugate_top_right(hI, p, n);
    if (ctr == 0 || valuation(ctr, p) >= 0) last_bad = n;
  }
  long N = std::max(last_bad + 1, 1L);
  for (long n = N; n <= N + 5; ++n) {
    Rational ctr = conjugate_top_right(hI, p, n);
    if (ctr == 0 || valuation(ctr, p) >= 0)
      throw InternalError("threshold verification failed at n = " +
                          std::to_string(n));
  }
  return N;
}

void require_escape_inputs(const Integer& p, const PrimeSet& T) {
  if (!is_prime(p)) throw DomainError("p must be prime");
  if (T.contains(p))
    throw PreconditionError("p must lie outside the ring primes");
}

}  // namespace

long escape_exponent(const PPMap& h, const Integer& p, const PrimeSet& T) {
  require_escape_inputs(p, T);
  auto [piece, hI] = witness_piece(h);
  (void)piece;
  return escape_threshold(*hI, p);
}

UnconfinementReport escape_report(const PPMap& h, const Integer& p,
                                  const PrimeSet& T) {
  require_escape_inputs(p, T);
  auto [piece, hI] = witness_piece(h);
  UnconfinementReport out;
  out.h = h;
  out.p = p;
  out.ring = T;
  out.threshold = escape_threshold(*hI, p);
  out.witness_interval = IntervalSpec{piece->lo, piece->hi,
                                      piece->lo.is_finite(),
                                      piece->hi.is_finite()};
  out.witness_matrix = *hI;
  for (long n = std::max(1L, out.threshold - 1); n <= out.threshold + 5; ++n) {
    EscapeEvidence row;
    row.n = n;
    row.conjugate = mob_conjugate(*hI, unconfinement_matrix(p, n));
    row.top_right = conjugate_top_right(*hI, p, n);
    if (row.top_right != 0) row.valuation = valuation(row.top_right, p);
    row.in_ring = in_s_integers(row.top_right, T);
    out.evidence.push_back(std::move(row));
  }
  return out;
}

void UnconfinementReport::validate() const {
  require_escape_inputs(p, ring);
  bool matched = false;
  for (const Piece& piece : h.pieces()) {
    if (piece.lo == witness_interval.lo && piece.hi == witness_interval.hi &&
        piece.matrix == witness_matrix) {
      matched = true;
      break;
    }
  }
  check(matched, "witness piece is not a piece of the element");
  check(!witness_matrix.is_identity(), "witness matrix is trivial");
  check(threshold == escape_threshold(witness_matrix, p),
        "threshold does not match the matrix data");
  check(!evidence.empty(), "no evidence rows");
  for (const EscapeEvidence& row : evidence) {
    check(row.n >= 1, "evidence exponent must be positive");
    check(row.conjugate == mob_conjugate(witness_matrix,
                                         unconfinement_matrix(p, row.n)),
          "conjugate matrix mismatch");
    Rational ctr = conjugate_top_right(witness_matrix, p, row.n);
    check(row.top_right == ctr, "top-right entry mismatch");
    if (ctr == 0) {
      check(!row.valuation.has_value(), "zero entry cannot carry a valuation");
    } else {
      check(row.valuation == valuation(ctr, p), "valuation mismatch");
    }
    check(row.in_ring == in_s_integers(ctr, ring), "ring membership mismatch");
    if (row.n >= threshold)
      check(!row.in_ring, "entry at or beyond the threshold stayed in the ring");
  }
}

ChabautyResult chabauty_escape(const std::vector<PPMap>& E, const Integer& p,
                               const PrimeSet& T) {
  require_escape_inputs(p, T);
  for (std::size_t i = 0; i < E.size(); ++i) {
    if (E[i].is_identity())
      throw PreconditionError("element " + std::to_string(i) + " is trivial");
  }
  ChabautyResult out;
  out.n = 1;
  for (const PPMap& h : E) {
    out.reports.push_back(escape_report(h, p, T));
    out.n = std::max(out.n, out.reports.back().threshold);
  }
  PPMap gn = unconfinement_element(p, out.n);
  PPMap gn_inv = pp_invert(gn);
  for (std::size_t i = 0; i < E.size(); ++i) {
    PPMap conj = pp_compose(pp_compose(gn_inv, E[i]), gn);
    if (pp_in_subgroup(conj, T))
      throw InternalError("conjugate of element " + std::to_string(i) +
                          " stayed in the subgroup");
  }
  return out;
}

}  // namespace ppg
