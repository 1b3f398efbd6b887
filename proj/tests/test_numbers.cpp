#include "doctest.h"
#include "ppg/numbers.hpp"

using namespace ppg;

TEST_CASE("make_rational canonicalizes") {
  CHECK(make_rational(2, 4) == make_rational(1, 2));
  CHECK(make_rational(1, -2) == make_rational(-1, 2));
  CHECK(make_rational(0, 7) == 0);
  CHECK_THROWS_AS(make_rational(1, 0), DomainError);
}

TEST_CASE("integer detection") {
  CHECK(is_integer(Rational(5)));
  CHECK(is_integer(make_rational(14, 7)));
  CHECK(!is_integer(make_rational(1, 2)));
}

TEST_CASE("p-adic valuation") {
  CHECK(valuation(Integer(12), 2) == 2);
  CHECK(valuation(Integer(1), 7) == 0);
  CHECK(valuation(make_rational(5, 27), 3) == -3);
  CHECK(valuation(make_rational(8, 3), 2) == 3);
  CHECK(valuation(make_rational(-9, 4), 3) == 2);
  CHECK_THROWS_AS(valuation(Integer(0), 2), DomainError);
  CHECK_THROWS_AS(valuation(Rational(0), 5), DomainError);
}

TEST_CASE("primality") {
  CHECK(is_prime(2));
  CHECK(is_prime(3));
  CHECK(is_prime(97));
  CHECK(is_prime(Integer("1000003")));
  CHECK(!is_prime(1));
  CHECK(!is_prime(4));
  CHECK(!is_prime(91));
}

TEST_CASE("squarefree decomposition") {
  auto check_parts = [](long n, long square, long radical) {
    SquarefreeParts parts = squarefree_decompose(n);
    CHECK(parts.square == square);
    CHECK(parts.radical == radical);
  };
  check_parts(1, 1, 1);
  check_parts(12, 2, 3);
  check_parts(49, 7, 1);
  check_parts(900, 30, 1);
  check_parts(2, 1, 2);

  SUBCASE("factor beyond the trial-division bound") {
    Integer big = Integer("1000003") * 4;  // 2^2 * 1000003
    SquarefreeParts parts = squarefree_decompose(big);
    CHECK(parts.square == 2);
    CHECK(parts.radical == Integer("1000003"));
  }
  SUBCASE("square of a large prime") {
    Integer big = Integer("1000003") * Integer("1000003") * 3;
    SquarefreeParts parts = squarefree_decompose(big);
    CHECK(parts.square == Integer("1000003"));
    CHECK(parts.radical == 3);
  }
  CHECK_THROWS_AS(squarefree_decompose(0), DomainError);
  CHECK_THROWS_AS(squarefree_decompose(-4), DomainError);
}

TEST_CASE("prime sets") {
  PrimeSet T = PrimeSet::parse("3,2,3");
  CHECK(T.size() == 2);
  CHECK(T.contains(2));
  CHECK(T.contains(3));
  CHECK(!T.contains(5));
  CHECK(T.smallest() == 2);
  CHECK(T.str() == "2,3");
  CHECK(T == PrimeSet::parse(" 2 , 3 "));

  PrimeSet S = PrimeSet::parse("2,3,7");
  CHECK(T.subset_of(S));
  CHECK(!S.subset_of(T));
  CHECK(S.set_difference(T).str() == "7");

  CHECK(PrimeSet::parse("").empty());
  CHECK_THROWS_AS(PrimeSet::parse("4"), DomainError);
  CHECK_THROWS_AS(PrimeSet::parse("2;3"), DomainError);
  CHECK_THROWS_AS(PrimeSet::parse("-2"), DomainError);
}

TEST_CASE("S-integer membership") {
  PrimeSet T23 = PrimeSet::parse("2,3");
  CHECK(in_s_integers(make_rational(5, 6), T23));
  CHECK(in_s_integers(Rational(7), T23));
  CHECK(in_s_integers(Rational(0), T23));
  CHECK(in_s_integers(make_rational(-1, 8), T23));
  CHECK(!in_s_integers(make_rational(5, 6), PrimeSet::parse("2")));
  CHECK(!in_s_integers(make_rational(1, 5), T23));
  CHECK(!in_s_integers(make_rational(1, 2), PrimeSet()));
  CHECK(in_s_integers(Rational(-4), PrimeSet()));
}
