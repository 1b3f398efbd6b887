#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "ppg/piecewise.hpp"

namespace ppg {

/// Interval with open/closed flags per end; infinite ends are always open.
struct IntervalSpec {
  ExtendedReal lo;
  ExtendedReal hi;
  bool lo_closed = false;
  bool hi_closed = false;

  static IntervalSpec closed(RealQuadratic u, RealQuadratic v);
  static IntervalSpec open(ExtendedReal u, ExtendedReal v);

  bool valid() const { return compare(lo, hi) == Ordering::less; }
  bool is_compact() const { return lo.is_finite() && hi.is_finite(); }
  bool contains(const RealQuadratic& x) const;

  bool operator==(const IntervalSpec&) const = default;
};

std::string to_string(const IntervalSpec& I);

/// Caps for the bounded searches. Exceeding one raises
/// BudgetExhaustedError with the cap that ran out.
struct SearchBudget {
  long brute_entry_bound = 64;     // exhaustive integer-matrix phase
  long targeted_doublings = 48;    // pin-depth levels of the targeted phase
  long max_power = 64;             // exponent cap on q^k before retrying q
  long max_shrink_steps = 200;     // sample-point bisection cap
  long max_inclusion_doublings = 64;  // exponent growth for h0 -> identity
};

/// Hyperbolic element of SL2(Z[1/T]) with repelling fixed point inside
/// window_repelling and attracting fixed point inside window_attracting
/// (disjoint open windows). Deterministic: exhaustive integer-matrix
/// enumeration by max-entry bound 1,2,4,... first, then hyperbolics with
/// both fixed points rational at p-power denominators for p in T, trace
/// p^j + p^-j, whose square discriminants keep all downstream arithmetic
/// rational. With T empty only the integer phase runs. Every candidate is
/// accepted only by the exact window tests.
SL2Matrix find_hyperbolic(const IntervalSpec& window_repelling,
                          const IntervalSpec& window_attracting,
                          const PrimeSet& T, const SearchBudget& budget = {});

/// As find_hyperbolic, but each exact-verified candidate is offered to
/// `accept` (with its repelling and attracting fixed points); the search
/// continues past candidates that are declined.
SL2Matrix find_hyperbolic_matching(
    const IntervalSpec& window_repelling, const IntervalSpec& window_attracting,
    const PrimeSet& T, const SearchBudget& budget,
    const std::function<bool(const SL2Matrix&, const RealQuadratic& repelling,
                             const RealQuadratic& attracting)>& accept);

/// One side of the tail construction, recorded in the frame where the tail
/// grows to the right of v (the left side is solved on the reflected line
/// and stores `reflected = true`).
struct TailRecord {
  bool moved = false;      // endpoint fixed: the tail is the identity
  bool reflected = false;
  bool downward = false;   // true when h0 v < v in this frame
  Rational x;              // rational probe with pole-free [v, x]
  SL2Matrix q;             // hyperbolic witness from find_hyperbolic
  long k = 1;              // least power passing the overtaking test
  RealQuadratic t;         // crossing: q^k t = h0 t
  RealQuadratic xi_minus;  // repelling fixed point of q
  RealQuadratic xi_plus;   // attracting fixed point of q
};

/// Replayable record of a compact-support extension: the data determine the
/// output map exactly, and validate() reruns every invariant from scratch.
struct LemmaTrace {
  SL2Matrix h0;
  IntervalSpec interval;
  TailRecord right;
  TailRecord left;
  PPMap result;

  /// Rebuilds the piece list from the recorded side data.
  PPMap rebuild() const;
  /// Throws Error unless all recorded invariants hold and rebuild()
  /// reproduces `result` exactly.
  void validate() const;
};

/// Compactly supported h1 agreeing with h0 on compact I = [u, v], all piece
/// matrices in SL2(Z[1/T]). Requires h0 in SL2(Z[1/T]) with its pole outside
/// I. Tail on each side follows the three cases: endpoint fixed (identity),
/// endpoint moved up (splice a hyperbolic power at its attracting point),
/// endpoint moved down (splice at the repelling point).
std::pair<PPMap, LemmaTrace> extend_on_interval(const SL2Matrix& h0,
                                                const IntervalSpec& I,
                                                const PrimeSet& T,
                                                const SearchBudget& budget = {});

/// Compactly supported b1 with b1^-1 J disjoint from J: an integer
/// translation by more than the length of J, extended off an integer hull of
/// J by the tail construction.
std::pair<PPMap, LemmaTrace> displace_off(const IntervalSpec& J,
                                          const PrimeSet& T,
                                          const SearchBudget& budget = {});

/// Certifies h = [h1, b1] with both factors compactly supported over
/// Z[1/ring]: exactly the data needed to place h in the derived subgroup of
/// the compactly supported part of the group over that ring.
struct CommutatorCertificate {
  PPMap h1;
  PPMap b1;
  PPMap h;
  PrimeSet ring;

  /// Recomputes the commutator and all support/ring facts; throws Error on
  /// any mismatch.
  void validate() const;
};

/// h agreeing with h0 on I, presented as a commutator of compactly
/// supported elements over Z[1/T].
std::pair<PPMap, CommutatorCertificate> lemma_element(
    const SL2Matrix& h0, const IntervalSpec& I, const PrimeSet& T,
    const SearchBudget& budget = {});

/// Everything commensuration_witness found and checked.
struct CommensurationWitness {
  PPMap h;
  CommutatorCertificate certificate;
  SL2Matrix local_conjugate;  // matrix of g^-1 h g over g^-1(I)
  Integer p;                  // prime of S \ T with the negative valuation
  Integer q;                  // prime of T powering the unipotent seed
  long n = 1;                 // exponent: seed entry is q^-n
  char offending_entry = 'a';
  SL2Matrix piece_matrix;     // matrix of g on the witnessing piece
  IntervalSpec piece_interval;
  IntervalSpec inner_interval;  // the compact I fed to the extension
};

/// For g over Z[1/S] but outside the T-subgroup, produces h in the derived
/// subgroup (certified) whose conjugate g^-1 h g leaves the T-subgroup:
/// the witness for nontrivial self-commensuration. The offending entry is
/// the first of (a, b, c, d) over the first offending piece; p defaults to
/// the smallest prime of S \ T with a hit but may be pinned by the caller.
CommensurationWitness commensuration_witness(
    const PPMap& g, const PrimeSet& S, const PrimeSet& T,
    const SearchBudget& budget = {},
    const std::optional<Integer>& pinned_p = std::nullopt);

/// The global affine map with matrix [[p^n, p^-2n], [0, p^-n]].
SL2Matrix unconfinement_matrix(const Integer& p, long n);
PPMap unconfinement_element(const Integer& p, long n);

/// Top-right entry of g_n^-1 hI g_n where g_n = unconfinement_matrix(p, n):
/// evaluates the closed form b p^-2n + (a-d) p^-3n - c p^-4n and cross-checks
/// it against the raw matrix product (InternalError on mismatch).
Rational conjugate_top_right(const SL2Matrix& hI, const Integer& p, long n);

/// One row of escape evidence at exponent n.
struct EscapeEvidence {
  long n = 1;
  SL2Matrix conjugate;           // g_n^-1 hI g_n
  Rational top_right;            // canonical (sign-normalized) entry
  std::optional<long> valuation; // v_p(top_right); nullopt when zero
  bool in_ring = true;           // in_s_integers(top_right, T)
};

/// Witness that conjugating h by g_n pushes it out of the T-subgroup for
/// every n >= threshold, with direct evidence rows around the threshold.
struct UnconfinementReport {
  PPMap h;
  Integer p;
  PrimeSet ring;
  long threshold = 1;              // least N with v_p < 0 for all n >= N
  IntervalSpec witness_interval;   // piece of h carrying witness_matrix
  SL2Matrix witness_matrix;        // first non-identity piece matrix
  std::vector<EscapeEvidence> evidence;  // n = max(1, N-1) .. N+5

  /// Recomputes every evidence row and the threshold claims; throws Error
  /// on mismatch.
  void validate() const;
};

/// Least N such that v_p(conjugate_top_right(hI, p, n)) < 0 for all n >= N,
/// where hI is the first non-identity piece matrix of h. Closed-form tail
/// analysis (the three term valuations have distinct slopes -2, -3, -4)
/// plus direct scans below the tail; N..N+5 re-verified directly.
long escape_exponent(const PPMap& h, const Integer& p, const PrimeSet& T);

/// escape_exponent together with the full evidence report.
UnconfinementReport escape_report(const PPMap& h, const Integer& p,
                                  const PrimeSet& T);

struct ChabautyResult {
  long n = 1;  // max escape exponent over the set
  std::vector<UnconfinementReport> reports;
};

/// For a finite set E of nontrivial elements, the exponent n at which the
/// conjugated subgroup avoids all of E, verified by full piecewise
/// conjugation of each element (not just the local matrix).
ChabautyResult chabauty_escape(const std::vector<PPMap>& E, const Integer& p,
                               const PrimeSet& T);

}  // namespace ppg
