#include "ppg/numbers.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>

namespace ppg {

Rational make_rational(const Integer& num, const Integer& den) {
  if (den == 0) throw DomainError("rational with zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

bool is_integer(const Rational& x) { return x.get_den() == 1; }

long valuation(const Integer& x, const Integer& p) {
  if (x == 0) throw DomainError("valuation of zero");
  Integer reduced;
  return static_cast<long>(mpz_remove(reduced.get_mpz_t(), x.get_mpz_t(), p.get_mpz_t()));
}

long valuation(const Rational& x, const Integer& p) {
  if (x == 0) throw DomainError("valuation of zero");
  return valuation(Integer(x.get_num()), p) - valuation(Integer(x.get_den()), p);
}

bool is_prime(const Integer& n) {
  return mpz_probab_prime_p(n.get_mpz_t(), 40) != 0;
}

namespace {

// Pollard rho (Brent variant) on an odd composite with no small factors.
// Decrements `effort` per squaring step; returns 0 once it runs out.
Integer pollard_rho(const Integer& n, long& effort) {
  for (std::uint64_t c = 1;; ++c) {
    Integer x = 2, y = 2, d = 1;
    Integer diff;
    while (d == 1) {
      if (--effort < 0) return 0;
      x = (x * x + c) % n;
      y = (y * y + c) % n;
      y = (y * y + c) % n;
      diff = x - y;
      if (diff == 0) break;  // cycle without factor, retry with next c
      d = gcd(diff, n);
    }
    if (d != 1 && d != n) return d;
    if (effort <= 0) return 0;
  }
}

bool decompose_rec(const Integer& m, Integer& square, Integer& radical,
                   long& effort);

// Merge a squarefree radical r into (square, radical), squaring out overlaps.
void merge_radical(const Integer& r, Integer& square, Integer& radical) {
  Integer g = gcd(r, radical);
  square *= g;
  radical = (radical / g) * (r / g);
}

bool decompose_rec(const Integer& m, Integer& square, Integer& radical,
                   long& effort) {
  if (m == 1) return true;
  if (mpz_perfect_square_p(m.get_mpz_t())) {
    Integer s;
    mpz_sqrt(s.get_mpz_t(), m.get_mpz_t());
    square *= s;
    return true;
  }
  if (is_prime(m)) {
    merge_radical(m, square, radical);
    return true;
  }
  Integer f = pollard_rho(m, effort);
  if (f == 0) return false;
  Integer sq1 = 1, rad1 = 1, sq2 = 1, rad2 = 1;
  if (!decompose_rec(f, sq1, rad1, effort) ||
      !decompose_rec(m / f, sq2, rad2, effort))
    return false;
  square *= sq1 * sq2;
  merge_radical(rad1, square, radical);
  merge_radical(rad2, square, radical);
  return true;
}

}  // namespace

std::optional<SquarefreeParts> try_squarefree_decompose(const Integer& d,
                                                        long effort) {
  if (d < 1) throw DomainError("squarefree_decompose needs d >= 1");
  Integer m = d, square = 1, radical = 1;
  // Trial division fast path; covers every radicand the constructions emit.
  for (unsigned long p = 2; p <= 4096 && Integer(p) * p <= m; p = (p == 2 ? 3 : p + 2)) {
    if (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
      int count = 0;
      while (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
        mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), p);
        ++count;
      }
      for (int i = 0; i < count / 2; ++i) square *= p;
      if (count % 2) radical *= p;
    }
  }
  if (!decompose_rec(m, square, radical, effort)) return std::nullopt;
  return SquarefreeParts{square, radical};
}

SquarefreeParts squarefree_decompose(const Integer& d) {
  std::optional<SquarefreeParts> parts =
      try_squarefree_decompose(d, std::numeric_limits<long>::max());
  if (!parts) throw InternalError("unbounded factoring gave up");
  return *parts;
}

PrimeSet::PrimeSet(std::vector<Integer> primes) : primes_(std::move(primes)) {
  for (const Integer& p : primes_) {
    if (p < 2 || !is_prime(p))
      throw DomainError("not a prime: " + to_string(p));
  }
  std::sort(primes_.begin(), primes_.end());
  primes_.erase(std::unique(primes_.begin(), primes_.end()), primes_.end());
}

PrimeSet PrimeSet::parse(const std::string& text) {
  std::vector<Integer> primes;
  std::string token;
  auto flush = [&] {
    if (!token.empty()) {
      primes.emplace_back(token);
      token.clear();
    }
  };
  for (char ch : text) {
    if (ch == ',') {
      flush();
    } else if (ch == ' ' || ch == '\t') {
      continue;
    } else if ((ch >= '0' && ch <= '9') || ch == '-') {
      token.push_back(ch);
    } else {
      throw DomainError(std::string("bad character in prime list: '") + ch + "'");
    }
  }
  flush();
  return PrimeSet(std::move(primes));
}

bool PrimeSet::contains(const Integer& p) const {
  return std::binary_search(primes_.begin(), primes_.end(), p);
}

bool PrimeSet::subset_of(const PrimeSet& other) const {
  return std::includes(other.primes_.begin(), other.primes_.end(),
                       primes_.begin(), primes_.end());
}

PrimeSet PrimeSet::set_difference(const PrimeSet& other) const {
  std::vector<Integer> out;
  std::set_difference(primes_.begin(), primes_.end(), other.primes_.begin(),
                      other.primes_.end(), std::back_inserter(out));
  PrimeSet result;
  result.primes_ = std::move(out);
  return result;
}

const Integer& PrimeSet::smallest() const {
  if (primes_.empty()) throw DomainError("smallest of empty prime set");
  return primes_.front();
}

std::string PrimeSet::str() const {
  if (primes_.empty()) return "{}";
  std::string out;
  for (std::size_t i = 0; i < primes_.size(); ++i) {
    if (i) out += ",";
    out += to_string(primes_[i]);
  }
  return out;
}

bool in_s_integers(const Rational& x, const PrimeSet& T) {
  Integer den = x.get_den();
  for (const Integer& p : T.primes()) {
    Integer reduced;
    mpz_remove(reduced.get_mpz_t(), den.get_mpz_t(), p.get_mpz_t());
    den = reduced;
  }
  return den == 1;
}

std::string to_string(const Integer& x) { return x.get_str(); }

std::string to_string(const Rational& x) {
  if (x.get_den() == 1) return x.get_num().get_str();
  return x.get_num().get_str() + "/" + x.get_den().get_str();
}

}  // namespace ppg
