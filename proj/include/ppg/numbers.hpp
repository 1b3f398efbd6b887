#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

#include "ppg/errors.hpp"

namespace ppg {

using Integer = mpz_class;
using Rational = mpq_class;

/// num/den in lowest terms with positive denominator. Throws DomainError if
/// den is zero.
Rational make_rational(const Integer& num, const Integer& den);

bool is_integer(const Rational& x);

/// p-adic valuation v_p(x) for nonzero x. Throws DomainError on x == 0.
long valuation(const Integer& x, const Integer& p);
long valuation(const Rational& x, const Integer& p);

bool is_prime(const Integer& n);

/// d = square^2 * radical with radical squarefree.
struct SquarefreeParts {
  Integer square;
  Integer radical;
};

SquarefreeParts squarefree_decompose(const Integer& d);

/// Bounded-effort variant: spends at most `effort` Pollard-rho steps across
/// the whole factorization and returns nullopt when that does not suffice.
/// Lets callers decline work on numbers that resist factoring instead of
/// stalling on them.
std::optional<SquarefreeParts> try_squarefree_decompose(const Integer& d,
                                                        long effort);

/// Finite set of primes, kept sorted and deduplicated. Construction rejects
/// non-primes.
class PrimeSet {
 public:
  PrimeSet() = default;
  explicit PrimeSet(std::vector<Integer> primes);

  /// Comma-separated list, e.g. "2,3,7". Whitespace around entries is
  /// ignored; an empty string gives the empty set.
  static PrimeSet parse(const std::string& text);

  bool contains(const Integer& p) const;
  bool subset_of(const PrimeSet& other) const;
  PrimeSet set_difference(const PrimeSet& other) const;

  bool empty() const { return primes_.empty(); }
  std::size_t size() const { return primes_.size(); }
  const std::vector<Integer>& primes() const { return primes_; }
  const Integer& smallest() const;
  std::string str() const;

  bool operator==(const PrimeSet&) const = default;

 private:
  std::vector<Integer> primes_;
};

/// True iff x lies in Z[1/T]: the denominator divides a product of powers of
/// primes in T.
bool in_s_integers(const Rational& x, const PrimeSet& T);

std::string to_string(const Integer& x);
std::string to_string(const Rational& x);

}  // namespace ppg
