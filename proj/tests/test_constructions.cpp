#include "doctest.h"
#include "ppg/constructions.hpp"

using namespace ppg;

namespace {

const SL2Matrix fib{2, 1, 1, 1};

Rational frac(long n, long d) { return make_rational(n, d); }

ExtendedReal pt(long n, long d = 1) { return ExtendedReal(RealQuadratic(frac(n, d))); }

PPMap global(const SL2Matrix& M) {
  return pp_make({Piece{ExtendedReal::neg_inf(), ExtendedReal::pos_inf(), M}});
}

// Hyperbolic matrix between its fixed points, identity elsewhere.
PPMap bump(const SL2Matrix& M) {
  FixedPointData fp = mob_fixed_points(M);
  REQUIRE(fp.cls == MapClass::hyperbolic);
  RealQuadratic u = fp.points[0].finite();
  RealQuadratic v = fp.points[1].finite();
  if (rq_compare(u, v) == Ordering::greater) std::swap(u, v);
  return pp_make({Piece{ExtendedReal::neg_inf(), ExtendedReal(u), SL2Matrix::identity()},
                  Piece{ExtendedReal(u), ExtendedReal(v), M},
                  Piece{ExtendedReal(v), ExtendedReal::pos_inf(), SL2Matrix::identity()}});
}

IntervalSpec seg(long lo, long hi) {
  return IntervalSpec::closed(RealQuadratic(lo), RealQuadratic(hi));
}

// Checks h against mob_apply of h0 at a few rationals spread over [u, v].
void check_agreement(const PPMap& h, const SL2Matrix& h0, const Rational& u,
                     const Rational& v) {
  for (int j = 0; j <= 8; ++j) {
    Rational x = u + (v - u) * j / 8;
    RealQuadratic want = mob_apply(h0, ProjPoint(x)).finite();
    CHECK(pp_eval(h, RealQuadratic(x)) == want);
  }
}

}  // namespace

TEST_CASE("interval spec basics") {
  IntervalSpec c = seg(0, 1);
  CHECK(c.valid());
  CHECK(c.is_compact());
  CHECK(c.contains(RealQuadratic(0)));
  CHECK(c.contains(RealQuadratic(frac(1, 2))));
  CHECK(!c.contains(RealQuadratic(-1)));

  IntervalSpec o = IntervalSpec::open(pt(0), pt(1));
  CHECK(!o.contains(RealQuadratic(0)));
  CHECK(o.contains(RealQuadratic(frac(1, 2))));

  IntervalSpec ray = IntervalSpec::open(ExtendedReal::neg_inf(), pt(0));
  CHECK(ray.valid());
  CHECK(!ray.is_compact());
  CHECK(ray.contains(RealQuadratic(-5)));
  CHECK(!ray.contains(RealQuadratic(0)));

  CHECK(!IntervalSpec::open(pt(1), pt(1)).valid());
  CHECK(to_string(c) == "[0,1]");
  CHECK(to_string(ray) == "(-inf,0)");
}

TEST_CASE("hyperbolic search lands in the requested windows") {
  // The golden-ratio windows admit the smallest candidate.
  SL2Matrix q = find_hyperbolic(IntervalSpec::open(pt(-1), pt(0)),
                                IntervalSpec::open(pt(1), pt(2)), PrimeSet{});
  CHECK(q == fib);

  FixedPointData fp = mob_fixed_points(q);
  CHECK(fp.cls == MapClass::hyperbolic);
  CHECK(IntervalSpec::open(pt(-1), pt(0)).contains(fp.points[*fp.repelling].finite()));
  CHECK(IntervalSpec::open(pt(1), pt(2)).contains(fp.points[*fp.attracting].finite()));
}

TEST_CASE("hyperbolic search consults the accept callback") {
  std::vector<SL2Matrix> declined;
  SL2Matrix q = find_hyperbolic_matching(
      IntervalSpec::open(pt(-1), pt(0)), IntervalSpec::open(pt(1), pt(2)),
      PrimeSet{}, {},
      [&](const SL2Matrix& cand, const RealQuadratic& rep, const RealQuadratic& att) {
        CHECK(rq_compare(rep, att) == Ordering::less);
        if (declined.size() < 2) {
          declined.push_back(cand);
          return false;
        }
        return true;
      });
  REQUIRE(declined.size() == 2);
  CHECK(declined[0] == fib);
  CHECK(q != declined[0]);
  CHECK(q != declined[1]);
}

TEST_CASE("hyperbolic search rejects overlapping or empty windows") {
  CHECK_THROWS_AS(find_hyperbolic(IntervalSpec::open(pt(0), pt(2)),
                                  IntervalSpec::open(pt(1), pt(3)), PrimeSet{}),
                  PreconditionError);
  CHECK_THROWS_AS(find_hyperbolic(IntervalSpec::open(pt(1), pt(1)),
                                  IntervalSpec::open(pt(2), pt(3)), PrimeSet{}),
                  PreconditionError);
}

TEST_CASE("hyperbolic search reaches targets no integer matrix can hit") {
  // No matrix with entries below the brute-force bound has a fixed point
  // within 1e-9 of 1/7, so this exercises the pinned rational phase.
  IntervalSpec wrep = IntervalSpec::open(
      ExtendedReal(RealQuadratic(frac(1, 7))),
      ExtendedReal(RealQuadratic(frac(1, 7) + Rational(1, Integer(1000000000)))));
  IntervalSpec watt = IntervalSpec::open(pt(-10), pt(0));
  SL2Matrix q = find_hyperbolic(wrep, watt, PrimeSet::parse("2"));
  FixedPointData fp = mob_fixed_points(q);
  CHECK(fp.cls == MapClass::hyperbolic);
  CHECK(wrep.contains(fp.points[*fp.repelling].finite()));
  CHECK(watt.contains(fp.points[*fp.attracting].finite()));
  CHECK(entries_in_ring(q, PrimeSet::parse("2")));
}

TEST_CASE("extension continues an upward shift off a compact interval") {
  SL2Matrix shift(1, 1, 0, 1);
  auto [h1, trace] = extend_on_interval(shift, seg(0, 1), PrimeSet::parse("2"));

  check_agreement(h1, shift, 0, 1);
  CHECK(pp_eval(h1, RealQuadratic(frac(1, 2))) == RealQuadratic(frac(3, 2)));
  SupportInterval s = pp_support(h1);
  CHECK(!s.empty);
  CHECK(s.compact);
  CHECK(pp_in_subgroup(h1, PrimeSet::parse("2")));

  CHECK(trace.right.moved);
  CHECK(!trace.right.downward);
  CHECK(trace.left.moved);
  CHECK(trace.left.reflected);
  CHECK(!trace.right.reflected);
  CHECK(trace.right.k >= 1);
  trace.validate();
  CHECK(pp_equals(trace.rebuild(), h1));

  LemmaTrace bad = trace;
  bad.right.k += 1;
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("extension handles fixed endpoints and downward motion") {
  // x -> x / (x/2 + 1) fixes 0 and pushes -1 down to -2.
  SL2Matrix h0(1, 0, frac(1, 2), 1);
  auto [h1, trace] = extend_on_interval(h0, seg(-1, 0), PrimeSet::parse("2"));
  CHECK(!trace.right.moved);
  CHECK(trace.left.moved);
  CHECK(trace.left.reflected);
  // Down on the line means up in the reflected frame.
  CHECK(!trace.left.downward);
  check_agreement(h1, h0, -1, 0);
  trace.validate();

  SL2Matrix down(1, -1, 0, 1);
  auto [h2, trace2] = extend_on_interval(down, seg(0, 1), PrimeSet::parse("2"));
  CHECK(trace2.right.downward);
  CHECK(!trace2.left.downward);
  check_agreement(h2, down, 0, 1);
  CHECK(pp_eval(h2, RealQuadratic(frac(1, 2))) == RealQuadratic(frac(-1, 2)));
  trace2.validate();

  auto [h3, trace3] =
      extend_on_interval(SL2Matrix::identity(), seg(0, 1), PrimeSet::parse("2"));
  CHECK(h3.is_identity());
  CHECK(!trace3.right.moved);
  CHECK(!trace3.left.moved);
  trace3.validate();
}

TEST_CASE("extension preconditions") {
  PrimeSet two = PrimeSet::parse("2");
  // fib's pole -1 sits inside [-2, 0].
  CHECK_THROWS_AS(extend_on_interval(fib, seg(-2, 0), two), PreconditionError);
  CHECK_THROWS_AS(extend_on_interval(SL2Matrix(1, frac(1, 3), 0, 1), seg(0, 1), two),
                  PreconditionError);
  CHECK_THROWS_AS(extend_on_interval(SL2Matrix(1, 1, 0, 1),
                                     IntervalSpec::open(ExtendedReal::neg_inf(), pt(0)),
                                     two),
                  PreconditionError);
}

TEST_CASE("displacement pushes an interval strictly off itself") {
  auto [b1, trace] = displace_off(seg(0, 1), PrimeSet::parse("2"));
  trace.validate();
  CHECK(pp_in_subgroup(b1, PrimeSet::parse("2")));
  CHECK(pp_support(b1).compact);

  PPMap b1inv = pp_invert(b1);
  RealQuadratic im0 = pp_eval(b1inv, RealQuadratic(0));
  RealQuadratic im1 = pp_eval(b1inv, RealQuadratic(1));
  // The preimage interval [b1^-1 0, b1^-1 1] lies entirely below 0.
  CHECK(rq_sign(im0) < 0);
  CHECK(rq_sign(im1) < 0);
}

TEST_CASE("lemma element is a certified commutator") {
  SL2Matrix shift(1, 1, 0, 1);
  PrimeSet two = PrimeSet::parse("2");
  auto [h, cert] = lemma_element(shift, seg(0, 1), two);

  check_agreement(h, shift, 0, 1);
  CHECK(pp_support(h).compact);
  CHECK(pp_in_subgroup(h, two));
  CHECK(cert.ring == two);
  CHECK(pp_equals(pp_commutator(cert.h1, cert.b1), h));
  cert.validate();

  CommutatorCertificate forged = cert;
  forged.h = PPMap::identity();
  CHECK_THROWS_AS(forged.validate(), Error);

  auto [trivial, cert0] = lemma_element(SL2Matrix::identity(), seg(0, 1), two);
  CHECK(trivial.is_identity());
  cert0.validate();
}

TEST_CASE("commensuration witness for a global translation") {
  PPMap g = global(SL2Matrix(1, frac(1, 2), 0, 1));
  PrimeSet S = PrimeSet::parse("2,3"), T = PrimeSet::parse("3");
  CommensurationWitness w = commensuration_witness(g, S, T);

  CHECK(w.p == 2);
  CHECK(w.q == 3);
  CHECK(w.offending_entry == 'b');
  CHECK(w.n >= 1);
  CHECK(w.piece_matrix == SL2Matrix(1, frac(1, 2), 0, 1));
  CHECK(w.inner_interval.is_compact());
  w.certificate.validate();

  CHECK(pp_in_subgroup(w.h, T));
  PPMap conj = pp_compose(pp_compose(pp_invert(g), w.h), g);
  CHECK(!pp_in_subgroup(conj, T));
  // The local conjugate is the seed pushed through the piece matrix.
  CHECK(!entries_in_ring(w.local_conjugate, T));
}

TEST_CASE("commensuration witness covers every entry position") {
  PrimeSet S = PrimeSet::parse("2,3"), T = PrimeSet::parse("3");
  std::vector<std::pair<PPMap, char>> cases;
  cases.emplace_back(global(SL2Matrix(frac(1, 2), 0, 0, 2)), 'a');
  cases.emplace_back(global(SL2Matrix(1, frac(1, 2), 0, 1)), 'b');
  cases.emplace_back(bump(SL2Matrix(1, 1, frac(1, 2), frac(3, 2))), 'c');
  cases.emplace_back(bump(SL2Matrix(2, 1, 2, frac(3, 2))), 'd');

  for (const auto& [g, expected] : cases) {
    CAPTURE(expected);
    CommensurationWitness w = commensuration_witness(g, S, T);
    CHECK(w.offending_entry == expected);
    CHECK(w.p == 2);
    CHECK(pp_in_subgroup(w.h, T));
    PPMap conj = pp_compose(pp_compose(pp_invert(g), w.h), g);
    CHECK(!pp_in_subgroup(conj, T));
  }
}

TEST_CASE("commensuration witness preconditions") {
  PrimeSet S = PrimeSet::parse("2,3"), T = PrimeSet::parse("3");
  PPMap g = global(SL2Matrix(1, frac(1, 2), 0, 1));
  // Already inside the T-subgroup: nothing to witness.
  CHECK_THROWS_AS(commensuration_witness(global(SL2Matrix(1, 1, 0, 1)), S, T),
                  PreconditionError);
  // T must be a proper subset of S.
  CHECK_THROWS_AS(commensuration_witness(g, S, S), PreconditionError);
  CHECK_THROWS_AS(commensuration_witness(g, PrimeSet::parse("2"), T),
                  PreconditionError);
  // A pinned prime must actually offend.
  CHECK_THROWS_AS(commensuration_witness(g, S, T, {}, Integer(3)),
                  PreconditionError);
  CHECK_THROWS_AS(
      commensuration_witness(global(SL2Matrix(1, frac(1, 3), 0, 1)),
                             PrimeSet::parse("2,3,5"), PrimeSet::parse("3"), {},
                             Integer(5)),
      PreconditionError);
}

TEST_CASE("scaling family and conjugate entries") {
  CHECK(unconfinement_matrix(2, 1) == SL2Matrix(2, frac(1, 4), 0, frac(1, 2)));
  CHECK(unconfinement_matrix(2, 1).inverse() ==
        SL2Matrix(frac(1, 2), frac(-1, 4), 0, 2));
  CHECK(pp_eval(unconfinement_element(2, 1), RealQuadratic(0)) ==
        RealQuadratic(frac(1, 2)));

  CHECK(conjugate_top_right(SL2Matrix(1, 1, 0, 1), 2, 1) == frac(1, 4));
  Rational deep = conjugate_top_right(fib, 3, 2);
  CHECK(deep == frac(89, 6561));
  CHECK(valuation(deep, 3) == -8);
}

TEST_CASE("escape threshold for a translation") {
  PPMap shift = global(SL2Matrix(1, 1, 0, 1));
  PrimeSet T = PrimeSet::parse("3");
  CHECK(escape_exponent(shift, 2, T) == 1);

  UnconfinementReport rep = escape_report(shift, 2, T);
  CHECK(rep.threshold == 1);
  REQUIRE(rep.evidence.size() == 6);
  for (std::size_t i = 0; i < rep.evidence.size(); ++i) {
    const EscapeEvidence& row = rep.evidence[i];
    CHECK(row.n == static_cast<long>(i) + 1);
    CHECK(row.valuation == -2 * row.n);
    CHECK(!row.in_ring);
  }
  rep.validate();

  UnconfinementReport forged = rep;
  forged.threshold = 2;
  CHECK_THROWS_AS(forged.validate(), Error);
  forged = rep;
  forged.evidence[0].top_right += 1;
  CHECK_THROWS_AS(forged.validate(), Error);
}

TEST_CASE("escape threshold can sit past a cancellation") {
  // For this matrix the top-right entry of the first conjugate is exactly 1,
  // which still lies in Z[1/3]; from the second conjugate on it escapes.
  SL2Matrix slow(13, 4, 16, 5);
  PPMap h = bump(slow);
  PrimeSet T = PrimeSet::parse("3");
  CHECK(escape_exponent(h, 2, T) == 2);

  UnconfinementReport rep = escape_report(h, 2, T);
  CHECK(rep.threshold == 2);
  CHECK(rep.witness_matrix == slow);
  REQUIRE(rep.evidence.size() == 7);
  CHECK(rep.evidence[0].n == 1);
  CHECK(rep.evidence[0].top_right == 1);
  CHECK(rep.evidence[0].valuation == 0);
  CHECK(rep.evidence[0].in_ring);
  CHECK(rep.evidence[1].top_right == frac(5, 16));
  CHECK(rep.evidence[1].valuation == -4);
  for (std::size_t i = 1; i < rep.evidence.size(); ++i)
    CHECK(!rep.evidence[i].in_ring);
  rep.validate();
}

TEST_CASE("joint escape exponent over a finite set") {
  PPMap shift = global(SL2Matrix(1, 1, 0, 1));
  ChabautyResult r =
      chabauty_escape({shift, bump(fib), bump(SL2Matrix(13, 4, 16, 5))}, 2,
                      PrimeSet::parse("3"));
  CHECK(r.n == 2);
  REQUIRE(r.reports.size() == 3);
  CHECK(r.reports[0].threshold == 1);
  CHECK(r.reports[2].threshold == 2);
  for (const UnconfinementReport& rep : r.reports) rep.validate();
}

TEST_CASE("escape preconditions") {
  PPMap shift = global(SL2Matrix(1, 1, 0, 1));
  CHECK_THROWS_AS(escape_exponent(shift, 4, PrimeSet::parse("3")), DomainError);
  CHECK_THROWS_AS(escape_exponent(shift, 2, PrimeSet::parse("2")),
                  PreconditionError);
  CHECK_THROWS_AS(escape_exponent(PPMap::identity(), 2, PrimeSet::parse("3")),
                  PreconditionError);
  CHECK_THROWS_AS(chabauty_escape({shift, PPMap::identity()}, 2, PrimeSet::parse("3")),
                  PreconditionError);
}
