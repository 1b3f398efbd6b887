#include "ppg/verify.hpp"

#include <algorithm>
#include <chrono>
#include <set>
#include <utility>

#include "oracles.hpp"
#include "ppg/errors.hpp"
#include "ppg/text.hpp"

namespace ppg {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

/// Collects failures without allocating on the passing path.
struct Checker {
  long total = 0;
  long failures = 0;
  std::string first;

  void expect(bool ok, const char* what, long idx) {
    ++total;
    if (!ok && failures++ == 0)
      first = std::string(what) + " (case " + std::to_string(idx) + ")";
  }
};

std::string passing_detail(const Checker& ck, const std::string& extra) {
  if (ck.failures == 0) return extra + "; " + std::to_string(ck.total) + " checks";
  return std::to_string(ck.failures) + "/" + std::to_string(ck.total) +
         " checks failed; first: " + ck.first;
}

RealQuadratic mob_value(const SL2Matrix& M, const RealQuadratic& x) {
  return mob_apply(M, ProjPoint(x)).finite();
}

Rational pow_rational(const Integer& base, long e) {
  Integer b;
  mpz_pow_ui(b.get_mpz_t(), base.get_mpz_t(),
             static_cast<unsigned long>(e < 0 ? -e : e));
  return e < 0 ? make_rational(1, b) : Rational(b);
}

long height_of(const Rational& x) {
  Integer num = abs(x.get_num());
  Integer den = x.get_den();
  Integer h = num > den ? num : den;
  return h.fits_slong_p() ? h.get_si() : std::numeric_limits<long>::max();
}

long height_of(const SL2Matrix& M) {
  return std::max(std::max(height_of(M.a()), height_of(M.b())),
                  std::max(height_of(M.c()), height_of(M.d())));
}

const std::vector<Integer>& squarefree_pool() {
  static const std::vector<Integer> pool = {
      2,  3,  5,  6,  7,  10, 11, 13, 14, 15, 17, 19, 21, 22, 23,
      26, 29, 30, 31, 33, 34, 35, 37, 38, 39, 41, 43, 46, 47, 51,
      53, 55, 57, 58, 59, 61, 62, 65, 66, 67, 69, 70, 71, 73, 79,
      83, 85, 86, 87, 89, 91, 93, 94, 95, 97};
  return pool;
}

}  // namespace

PrimeSet random_ring(Rng& rng) {
  static const Integer all[4] = {2, 3, 5, 7};
  long mask = rng.uniform(1, 15);
  std::vector<Integer> primes;
  for (int i = 0; i < 4; ++i)
    if (mask & (1 << i)) primes.push_back(all[i]);
  return PrimeSet(primes);
}

Rational random_ring_rational(Rng& rng, const PrimeSet& T, long height) {
  Integer num = rng.uniform(-height, height);
  Integer den = 1;
  const Integer& q = rng.pick(T.primes());
  long e = rng.uniform(0, 2);
  mpz_pow_ui(den.get_mpz_t(), q.get_mpz_t(), static_cast<unsigned long>(e));
  return make_rational(num, den);
}

RealQuadratic random_quadratic(Rng& rng) {
  Rational rat = make_rational(rng.uniform(-100, 100), rng.uniform(1, 50));
  if (rng.coin()) return RealQuadratic(rat);
  Rational coeff = make_rational(rng.uniform(-100, 100), rng.uniform(1, 50));
  return RealQuadratic(rat, coeff, rng.pick(squarefree_pool()));
}

SL2Matrix random_sl2(Rng& rng) {
  SL2Matrix out = SL2Matrix::identity();
  long k = rng.uniform(1, 4);
  for (long i = 0; i < k; ++i) {
    Rational s = make_rational(rng.uniform(-4, 4), rng.uniform(1, 3));
    out = out * (rng.coin() ? SL2Matrix(1, s, 0, 1) : SL2Matrix(1, 0, s, 1));
  }
  return out;
}

PPMap bump_from(const SL2Matrix& M) {
  FixedPointData fp = mob_fixed_points(M);
  if (fp.cls != MapClass::hyperbolic || M.is_affine())
    throw PreconditionError("bump needs a hyperbolic matrix with finite fixed points");
  RealQuadratic lo = fp.points[0].finite();
  RealQuadratic hi = fp.points[1].finite();
  if (rq_compare(hi, lo) == Ordering::less) std::swap(lo, hi);
  return pp_make({Piece{ExtendedReal::neg_inf(), ExtendedReal(lo), SL2Matrix::identity()},
                  Piece{ExtendedReal(lo), ExtendedReal(hi), M},
                  Piece{ExtendedReal(hi), ExtendedReal::pos_inf(), SL2Matrix::identity()}});
}

PPMap random_ppmap(Rng& rng, const PrimeSet& T) {
  static const std::vector<SL2Matrix> hyperbolics = {
      SL2Matrix(2, 1, 1, 1), SL2Matrix(3, 1, 2, 1), SL2Matrix(3, 2, 1, 1),
      SL2Matrix(5, 2, 2, 1), SL2Matrix(4, 1, 3, 1)};
  PPMap out = PPMap::identity();
  long k = rng.uniform(1, 3);
  for (long i = 0; i < k; ++i) {
    PPMap factor = PPMap::identity();
    switch (rng.uniform(0, 3)) {
      case 0: {
        Rational t = random_ring_rational(rng, T, 6);
        factor = pp_make({Piece{ExtendedReal::neg_inf(), ExtendedReal::pos_inf(),
                                SL2Matrix(1, t, 0, 1)}});
        break;
      }
      case 1: {
        Rational u = pow_rational(rng.pick(T.primes()), rng.uniform(1, 2));
        if (rng.coin()) u = Rational(1) / u;
        factor = pp_make({Piece{ExtendedReal::neg_inf(), ExtendedReal::pos_inf(),
                                SL2Matrix(u, 0, 0, Rational(1) / u)}});
        break;
      }
      case 2: {
        SL2Matrix M = rng.pick(hyperbolics);
        long r = rng.uniform(-3, 3);
        if (r != 0) {
          SL2Matrix shift(1, Rational(r), 0, 1);
          M = mob_conjugate(M, shift);
        }
        factor = bump_from(M);
        break;
      }
      default: {
        Rational s = Rational(1) / pow_rational(rng.pick(T.primes()),
                                                rng.uniform(1, 2));
        Rational m{rng.uniform(1, 3)};
        factor = bump_from(SL2Matrix(1, m, s, 1 + m * s));
        break;
      }
    }
    out = pp_compose(out, factor);
  }
  return out;
}

namespace {

// ---------------------------------------------------------------- criterion 1

CriterionResult criterion_group_laws(std::uint64_t seed) {
  auto start = Clock::now();
  Rng rng(seed ^ 0xa1);
  Checker ck;
  const long count = 500;
  std::vector<PPMap> maps;
  maps.reserve(count);
  for (long i = 0; i < count; ++i) {
    PrimeSet T = random_ring(rng);
    maps.push_back(random_ppmap(rng, T));
  }
  PPMap id = PPMap::identity();
  for (long i = 0; i < count; ++i) {
    const PPMap& f = maps[i];
    PPMap f_inv = pp_invert(f);
    ck.expect(pp_equals(pp_compose(f, f_inv), id), "f after f^-1 is identity", i);
    ck.expect(pp_equals(pp_compose(f_inv, f), id), "f^-1 after f is identity", i);
    ck.expect(pp_equals(pp_compose(f, id), f), "right identity", i);
    ck.expect(pp_equals(pp_compose(id, f), f), "left identity", i);
    const PPMap& g = maps[(i + 1) % count];
    const PPMap& h = maps[(i + 2) % count];
    ck.expect(pp_equals(pp_compose(pp_compose(f, g), h),
                        pp_compose(f, pp_compose(g, h))),
              "associativity", i);
    RealQuadratic x{make_rational(rng.uniform(-40, 40), rng.uniform(1, 7))};
    ck.expect(pp_eval(pp_compose(f, g), x) == pp_eval(f, pp_eval(g, x)),
              "evaluation respects composition", i);
  }
  double secs = seconds_since(start);
  bool pass = ck.failures == 0 && secs < 60.0;
  std::string detail = passing_detail(ck, std::to_string(count) + " maps");
  if (ck.failures == 0 && secs >= 60.0) detail = "over the 60 s limit";
  return {1, "group-law suite", pass, detail, secs};
}

// ---------------------------------------------------------------- criterion 2

CriterionResult criterion_arithmetic_oracle(std::uint64_t seed) {
  auto start = Clock::now();
  Rng rng(seed ^ 0xa2);
  Checker ck;
  const long count = 10000;
  for (long i = 0; i < count; ++i) {
    RealQuadratic a = random_quadratic(rng);
    ck.expect(rq_sign(a) == oracle::sign_oracle(a), "sign matches oracle", i);
    RealQuadratic b = a;
    switch (rng.uniform(0, 2)) {
      case 0: break;  // equal pair
      case 1:
        b = RealQuadratic(a.rat() + make_rational(rng.uniform(-3, 3),
                                                  rng.uniform(1, 40)),
                          a.coeff(), a.radicand());
        break;
      default: b = random_quadratic(rng); break;
    }
    ck.expect(rq_compare(a, b) == oracle::compare_oracle(a, b),
              "compare matches oracle", i);
  }
  static const std::vector<Integer> val_primes = {2, 3, 5, 7, 11, 13};
  for (long i = 0; i < count; ++i) {
    Rational x = make_rational(rng.uniform(-600, 600), rng.uniform(1, 600));
    Rational y = make_rational(rng.uniform(-600, 600), rng.uniform(1, 600));
    if (x == 0) x = 1;
    if (y == 0) y = make_rational(1, 2);
    const Integer& p = rng.pick(val_primes);
    long vx = valuation(x, p), vy = valuation(y, p);
    ck.expect(valuation(x * y, p) == vx + vy, "v(xy) = v(x) + v(y)", i);
    ck.expect(valuation(Rational(1) / x, p) == -vx, "v(1/x) = -v(x)", i);
    if (x + y != 0) {
      long vs = valuation(x + y, p);
      ck.expect(vs >= std::min(vx, vy), "ultrametric bound", i);
      if (vx != vy)
        ck.expect(vs == std::min(vx, vy), "ultrametric equality", i);
    }
  }
  double secs = seconds_since(start);
  return {2, "arithmetic oracle suite", ck.failures == 0,
          passing_detail(ck, "2x10^4 oracle cases"), secs};
}

// ---------------------------------------------------------------- criterion 3

oracle::RawMat raw_of(const SL2Matrix& M) {
  return oracle::RawMat{M.a(), M.b(), M.c(), M.d()};
}

CriterionResult criterion_conjugation_identities(std::uint64_t seed) {
  auto start = Clock::now();
  Rng rng(seed ^ 0xa3);
  Checker ck;
  const long count = 1000;
  for (long i = 0; i < count; ++i) {
    SL2Matrix M = random_sl2(rng);
    Rational s = make_rational(rng.uniform(-60, 60), rng.uniform(1, 30));
    if (s == 0) s = make_rational(1, 9);
    const Rational &a = M.a(), &b = M.b(), &c = M.c(), &d = M.d();
    oracle::RawMat lower = oracle::raw_conjugate({1, 0, s, 1}, raw_of(M));
    ck.expect(lower.a == 1 - a * b * s && lower.b == -b * b * s &&
                  lower.c == a * a * s && lower.d == 1 + a * b * s,
              "lower-unipotent conjugation display", i);
    oracle::RawMat upper = oracle::raw_conjugate({1, s, 0, 1}, raw_of(M));
    ck.expect(upper.a == 1 + c * d * s && upper.b == d * d * s &&
                  upper.c == -c * c * s && upper.d == 1 - c * d * s,
              "upper-unipotent conjugation display", i);
  }
  static const std::vector<Integer> primes = {2, 3, 5, 7, 11};
  for (long i = 0; i < count; ++i) {
    SL2Matrix hI = random_sl2(rng);
    const Integer& p = rng.pick(primes);
    long n = rng.uniform(1, 6);
    Rational lib = conjugate_top_right(hI, p, n);
    oracle::RawMat brute =
        oracle::raw_conjugate(raw_of(hI), raw_of(unconfinement_matrix(p, n)));
    ck.expect(lib == brute.b, "diagonal conjugation top-right formula", i);
  }
  double secs = seconds_since(start);
  bool pass = ck.failures == 0 && secs < 10.0;
  std::string detail = passing_detail(ck, "10^3 instances per identity");
  if (ck.failures == 0 && secs >= 10.0) detail = "over the 10 s limit";
  return {3, "conjugation identities", pass, detail, secs};
}

// ---------------------------------------------------------------- criterion 4

SL2Matrix random_ring_matrix(Rng& rng, const PrimeSet& T, long max_height) {
  for (;;) {
    SL2Matrix out = SL2Matrix::identity();
    long k = rng.uniform(1, 2);
    for (long i = 0; i < k; ++i) {
      Rational s = random_ring_rational(rng, T, 3);
      out = out * (rng.coin() ? SL2Matrix(1, s, 0, 1) : SL2Matrix(1, 0, s, 1));
    }
    if (!out.is_identity() && height_of(out) <= max_height) return out;
  }
}

CriterionResult criterion_lemma_pipeline(std::uint64_t seed) {
  auto start = Clock::now();
  Rng rng(seed ^ 0xa4);
  Checker ck;
  const long count = 100;
  for (long i = 0; i < count; ++i) {
    PrimeSet T = random_ring(rng);
    SL2Matrix h0 = random_ring_matrix(rng, T, 50);
    Rational u, v;
    for (;;) {
      u = make_rational(rng.uniform(-48, 40), rng.uniform(1, 6));
      v = u + make_rational(rng.uniform(1, 24), rng.uniform(1, 6));
      std::optional<Rational> pole = h0.pole();
      if (!pole || *pole < u || *pole > v) break;
    }
    try {
      auto [h, cert] = lemma_element(
          h0, IntervalSpec::closed(RealQuadratic(u), RealQuadratic(v)), T);
      bool samples_ok = true;
      Rational step = (v - u) / 19;
      for (int j = 0; j < 20; ++j) {
        RealQuadratic x{u + step * j};
        if (pp_eval(h, x) != mob_value(h0, x)) samples_ok = false;
      }
      ck.expect(samples_ok, "agrees with h0 on 20 interval samples", i);
      ck.expect(pp_support(h).compact, "compact support", i);
      cert.validate();
      ck.expect(true, "certificate revalidates", i);
    } catch (const Error& e) {
      ck.expect(false, "pipeline completed", i);
      if (ck.first.find(':') == std::string::npos) ck.first += ": " + std::string(e.what());
    }
  }
  double secs = seconds_since(start);
  bool pass = ck.failures == 0 && secs < 600.0;
  std::string detail = passing_detail(ck, "100 randomized (h0, I, T)");
  if (ck.failures == 0 && secs >= 600.0) detail = "over the 600 s limit";
  return {4, "compact-extension pipeline", pass, detail, secs};
}

// ---------------------------------------------------------------- criterion 5

PPMap global_map(const SL2Matrix& M) {
  return pp_make({Piece{ExtendedReal::neg_inf(), ExtendedReal::pos_inf(), M}});
}

struct WitnessCase {
  PPMap g;
  PrimeSet S;
  PrimeSet T;
  Integer p;
  char expected;  // 0 when no position is pinned
};

std::vector<WitnessCase> witness_corpus(Rng& rng) {
  std::vector<WitnessCase> cases;
  std::vector<std::pair<PrimeSet, Integer>> rings = {
      {PrimeSet({3}), 2},  {PrimeSet({2}), 3},    {PrimeSet({2, 3}), 5},
      {PrimeSet({7}), 2},  {PrimeSet({2, 5}), 3}, {PrimeSet({3, 5}), 7},
  };
  auto with_p = [](const PrimeSet& T, const Integer& p) {
    std::vector<Integer> primes = T.primes();
    primes.push_back(p);
    return PrimeSet(primes);
  };
  auto base_for = [&](char pos, const Integer& p) -> PPMap {
    Rational pinv = Rational(1) / Rational(p);
    switch (pos) {
      case 'a':
        return global_map(SL2Matrix(pinv, 0, 0, Rational(p)));
      case 'b':
        return global_map(SL2Matrix(1, pinv, 0, 1));
      case 'c':
        return bump_from(SL2Matrix(1, 1, pinv, 1 + pinv));
      default:
        return bump_from(
            SL2Matrix(Rational(p), 1, Rational(p), (1 + Rational(p)) * pinv));
    }
  };
  const char positions[4] = {'a', 'b', 'c', 'd'};
  for (int i = 0; i < 8; ++i) {
    auto& [T, p] = rings[i % rings.size()];
    char pos = positions[i % 4];
    cases.push_back({base_for(pos, p), with_p(T, p), T, p, pos});
  }
  while (cases.size() < 25) {
    auto& [T, p] = rings[cases.size() % rings.size()];
    char pos = positions[cases.size() % 4];
    PPMap base = base_for(pos, p);
    // Conjugating by a T-element moves the offense around but cannot land
    // the element back in the T-subgroup.
    PPMap tau = rng.coin()
                    ? global_map(SL2Matrix(1, random_ring_rational(rng, T, 5), 0, 1))
                    : random_ppmap(rng, T);
    PPMap g = pp_compose(pp_compose(pp_invert(tau), base), tau);
    cases.push_back({std::move(g), with_p(T, p), T, p, 0});
  }
  return cases;
}

CriterionResult criterion_commensuration(std::uint64_t seed) {
  auto start = Clock::now();
  Rng rng(seed ^ 0xa5);
  Checker ck;
  std::set<char> seen;
  std::vector<WitnessCase> cases = witness_corpus(rng);
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const WitnessCase& wc = cases[i];
    try {
      CommensurationWitness w = commensuration_witness(wc.g, wc.S, wc.T);
      seen.insert(w.offending_entry);
      if (wc.expected)
        ck.expect(w.offending_entry == wc.expected, "pinned offending entry",
                  static_cast<long>(i));
      w.certificate.validate();
      ck.expect(pp_in_subgroup(w.h, wc.T), "h lies in the T-subgroup",
                static_cast<long>(i));
      PPMap conj = pp_compose(pp_compose(pp_invert(wc.g), w.h), wc.g);
      ck.expect(!pp_in_subgroup(conj, wc.T),
                "g^-1 h g leaves the T-subgroup", static_cast<long>(i));
    } catch (const Error& e) {
      ck.expect(false, "witness construction completed", static_cast<long>(i));
      if (ck.failures == 1) ck.first += ": " + std::string(e.what());
    }
  }
  ck.expect(seen.size() == 4, "all four offending positions covered", 0);
  double secs = seconds_since(start);
  return {5, "commensuration witnesses", ck.failures == 0,
          passing_detail(ck, "25 elements"), secs};
}

// ---------------------------------------------------------------- criterion 6

std::vector<PPMap> escape_corpus(Rng& rng, const PrimeSet& T, std::size_t count) {
  std::vector<PPMap> out;
  while (out.size() < count) {
    PPMap h = random_ppmap(rng, T);
    if (!h.is_identity()) out.push_back(std::move(h));
  }
  return out;
}

CriterionResult criterion_unconfinement(std::uint64_t seed) {
  auto start = Clock::now();
  Rng rng(seed ^ 0xa6);
  Checker ck;
  std::vector<std::pair<PrimeSet, Integer>> rings = {
      {PrimeSet({3}), 2}, {PrimeSet({2}), 3}, {PrimeSet({2, 3}), 5},
      {PrimeSet({3}), 7}, {PrimeSet({2, 7}), 3},
  };
  for (long i = 0; i < 25; ++i) {
    auto& [T, p] = rings[i % rings.size()];
    PPMap h = escape_corpus(rng, T, 1).front();
    try {
      long N = escape_exponent(h, p, T);
      UnconfinementReport rep = escape_report(h, p, T);
      rep.validate();
      ck.expect(rep.threshold == N, "report threshold matches exponent", i);
      for (long n = N; n <= N + 5; ++n) {
        PPMap gn = unconfinement_element(p, n);
        PPMap conj = pp_compose(pp_compose(pp_invert(gn), h), gn);
        ck.expect(!pp_in_subgroup(conj, T), "conjugate escapes at n >= N", i);
      }
      if (N > 1) {
        // The step below the threshold is reported as observed, whichever
        // way it falls; a ring-leaving witness entry must imply escape.
        PPMap gn = unconfinement_element(p, N - 1);
        PPMap conj = pp_compose(pp_compose(pp_invert(gn), h), gn);
        bool inside = pp_in_subgroup(conj, T);
        const EscapeEvidence& row = rep.evidence.front();
        ck.expect(row.n == N - 1, "evidence starts one below the threshold", i);
        if (!row.in_ring)
          ck.expect(!inside, "witness entry outside the ring implies escape", i);
      }
    } catch (const Error& e) {
      ck.expect(false, "escape analysis completed", i);
      if (ck.failures == 1) ck.first += ": " + std::string(e.what());
    }
  }
  PrimeSet T0({3});
  Integer p0 = 2;
  std::vector<PPMap> E = escape_corpus(rng, T0, 10);
  try {
    ChabautyResult cr = chabauty_escape(E, p0, T0);
    PPMap gn = unconfinement_element(p0, cr.n);
    PPMap gn_inv = pp_invert(gn);
    for (std::size_t i = 0; i < E.size(); ++i) {
      ck.expect(cr.n >= cr.reports[i].threshold,
                "common exponent dominates each threshold",
                static_cast<long>(i));
      PPMap conj = pp_compose(pp_compose(gn_inv, E[i]), gn);
      ck.expect(!pp_in_subgroup(conj, T0), "set member escapes at the common n",
                static_cast<long>(i));
    }
  } catch (const Error& e) {
    ck.expect(false, "set escape completed", 0);
    if (ck.failures == 1) ck.first += ": " + std::string(e.what());
  }
  double secs = seconds_since(start);
  return {6, "unconfinement witnesses", ck.failures == 0,
          passing_detail(ck, "25 elements + 10-element set"), secs};
}

// ---------------------------------------------------------------- criterion 7

std::string perturb_whitespace(const std::string& text, Rng& rng) {
  std::string out;
  for (char c : text) {
    out += c;
    if (c == ',' && rng.coin()) out += ' ';
    if (c == ';' && rng.coin()) out += '\n';
    if (c == ':' && rng.coin()) out += "  ";
  }
  return out;
}

const std::vector<std::string>& malformed_corpus() {
  static const std::vector<std::string> docs = {
      "",
      "(",
      "(-inf,+inf)",
      "(-inf,+inf):[[1,1],[0,1]",
      "(-inf,+inf):[[2,0],[0,1]]",
      "(0,1):[[1,0],[0,1]]",
      "(-inf,0):[[1,1],[0,1]];(0,+inf):[[1,0],[0,1]]",
      "(-inf,+inf):[[1,1/0],[0,1]]",
      "(-inf,sqrt(-2)):[[1,0],[0,1]];(sqrt(-2),+inf):[[1,0],[0,1]]",
      "(+inf,-inf):[[1,0],[0,1]]",
      "(-inf,1):[[1,0],[0,1]];(0,+inf):[[1,0],[0,1]]",
      "(-inf,+inf):[[1,0],[1,1]]",
      "(-inf,1/2+1/2*sqrt):[[1,0],[0,1]]",
      "# ring: 4\n(-inf,+inf):[[1,0],[0,1]]",
      "(-inf,x):[[1,0],[0,1]]",
      ";(-inf,+inf):[[1,0],[0,1]]",
      "(-inf,+inf):[[1,0],[0,1]];",
      "(-inf,+inf):[[1//2,0],[0,1]]",
      "(-inf,+inf):[[1,0],[0,--1]]",
      "(-inf,+inf):[[1,0],[0,1]] extra",
  };
  return docs;
}

CriterionResult criterion_round_trip(std::uint64_t seed) {
  auto start = Clock::now();
  Rng rng(seed ^ 0xa7);
  Checker ck;
  long quadratic_docs = 0;
  for (long i = 0; i < 200; ++i) {
    PrimeSet T = random_ring(rng);
    ElementDocument doc;
    doc.element = random_ppmap(rng, T);
    if (rng.coin()) doc.name = "elem-" + std::to_string(i);
    if (rng.coin()) doc.ring = T;
    for (const Piece& piece : doc.element.pieces()) {
      if (piece.lo.is_finite() && !piece.lo.finite().is_rational()) {
        ++quadratic_docs;
        break;
      }
    }
    try {
      std::string raw = perturb_whitespace(format_document(doc), rng);
      std::string normalized = format_document(parse_document(raw));
      std::string again = format_document(parse_document(normalized));
      ck.expect(again == normalized, "byte-identical after one normalization", i);
    } catch (const Error& e) {
      ck.expect(false, "document parsed", i);
      if (ck.failures == 1) ck.first += ": " + std::string(e.what());
    }
  }
  ck.expect(quadratic_docs >= 20, "corpus includes quadratic breakpoints", 0);
  const auto& bad = malformed_corpus();
  for (std::size_t i = 0; i < bad.size(); ++i) {
    bool rejected_with_location = false;
    try {
      parse_document(bad[i]);
    } catch (const ParseError& e) {
      rejected_with_location = e.line() >= 1 && e.col() >= 1;
    } catch (const ValidationError& e) {
      rejected_with_location = !e.violations().empty();
    } catch (const Error&) {
      rejected_with_location = false;
    }
    ck.expect(rejected_with_location, "malformed document rejected with location",
              static_cast<long>(i));
  }
  double secs = seconds_since(start);
  return {7, "serialization round-trip", ck.failures == 0,
          passing_detail(ck, "200 documents + 20 malformed"), secs};
}

}  // namespace

std::vector<CriterionResult> run_acceptance_suite(std::uint64_t seed) {
  std::vector<CriterionResult> out;
  out.push_back(criterion_group_laws(seed));
  out.push_back(criterion_arithmetic_oracle(seed));
  out.push_back(criterion_conjugation_identities(seed));
  out.push_back(criterion_lemma_pipeline(seed));
  out.push_back(criterion_commensuration(seed));
  out.push_back(criterion_unconfinement(seed));
  out.push_back(criterion_round_trip(seed));
  return out;
}

}  // namespace ppg
