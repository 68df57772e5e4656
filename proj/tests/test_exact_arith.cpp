#include <doctest.h>

#include <random>

#include "chameleon/error.hpp"
#include "chameleon/exact_arith.hpp"
#include "support/oracles.hpp"

using namespace chameleon;
using oracle::R;

TEST_CASE("rationals stay in lowest terms") {
  Rational q(BigInt(6), BigInt(-4));
  CHECK(q.num() == -3);
  CHECK(q.den() == 2);
  CHECK(R("6/9") == Rational(2, 3));
  CHECK(R("-3/8").str() == "-3/8");
  CHECK(R("4/2").str() == "2");
  CHECK_THROWS_AS(R("1/0"), Error);
  CHECK_THROWS_AS(R("abc"), Error);
  CHECK_THROWS_AS(R("1/-2"), Error);
  CHECK(R("7/3").mod(Rational(2)) == R("1/3"));
  CHECK(R("-1/3").mod(Rational(1)) == R("2/3"));
  CHECK(R("-7/2").floor() == -4);
  CHECK(R("-7/2").ceil() == -3);
}

TEST_CASE("exact_log recognises integral powers") {
  CHECK(exact_log(R("8"), 2) == 3);
  CHECK(exact_log(R("1/9"), 3) == -2);
  CHECK(exact_log(R("1"), 5) == 0);
  CHECK_FALSE(exact_log(R("3"), 2));
  CHECK_FALSE(exact_log(R("-2"), 2));
  CHECK_FALSE(exact_log(R("2/3"), 2));
}

TEST_CASE("to_nadic") {
  auto a = to_nadic(R("5/16"), 2);
  REQUIRE(a);
  CHECK(a->mantissa() == 5);
  CHECK(a->exponent() == 4);
  CHECK_FALSE(to_nadic(R("1/3"), 2));
  auto b = to_nadic(R("6/9"), 3);
  REQUIRE(b);
  CHECK(b->mantissa() == 2);
  CHECK(b->exponent() == 1);
  auto c = to_nadic(R("12"), 2);
  REQUIRE(c);
  CHECK(c->exponent() == 0);
  CHECK(c->mantissa() == 12);
}

TEST_CASE("phi_n") {
  CHECK(phi_n(R("5/16"), 2) == 0);
  CHECK(phi_n(R("1234"), 10) == 1);
  CHECK(phi_n(R("5/3"), 3) == 1);
  for (long n : {2L, 3L, 5L, 10L}) CHECK(phi_n(Rational(n), n) == (n == 2 ? 0 : 1));
}

TEST_CASE("trailing_zeros") {
  CHECK(trailing_zeros(12, 2) == 2);
  CHECK(trailing_zeros(8, 2) == 3);
  CHECK(trailing_zeros(5, 2) == 0);
  CHECK(trailing_zeros(18, 3) == 2);
}

TEST_CASE("omega_K") {
  CHECK(omega_K(*to_nadic(R("5/16"), 2), 2).value() == R("1/4"));
  CHECK(omega_K(*to_nadic(R("3/8"), 2), 1).value() == R("1/2"));
  auto x = *to_nadic(R("11/27"), 3);
  CHECK(omega_K(x, 3).value() == R("11/27"));
  CHECK_THROWS_AS(omega_K(*to_nadic(R("1/2"), 2), 2), Error);
}

TEST_CASE("classify_point") {
  CHECK(classify_point(R("7/8"), 2) == PointClass::NAdicPoint);
  CHECK(classify_point(R("1/3"), 2) == PointClass::RationalNonNAdic);
  CHECK(classify_point(R("1/6"), 2) == PointClass::RationalNonNAdic);
}

TEST_CASE("circle points reduce into [0, r)") {
  CirclePoint p(R("5/2"), 2);
  CHECK(p.value() == R("1/2"));
  CHECK(CirclePoint(R("-1/4"), 1).value() == R("3/4"));
}

TEST_CASE("property: phi_n is a ring homomorphism agreeing with digit sums") {
  std::mt19937_64 rng(7);
  for (long n : {2L, 3L, 5L, 10L}) {
    std::uniform_int_distribution<long> num(-5000, 5000);
    std::uniform_int_distribution<long> ex(0, 4);
    for (int t = 0; t < 300; ++t) {
      Rational x = Rational(num(rng)) / Rational::power(n, ex(rng));
      Rational y = Rational(num(rng)) / Rational::power(n, ex(rng));
      const long m = n - 1;
      CHECK(phi_n(x + y, n) == (phi_n(x, n) + phi_n(y, n)) % m);
      CHECK(phi_n(x * y, n) == (phi_n(x, n) * phi_n(y, n)) % m);
      CHECK(phi_n(x, n) == oracle::digit_sum_phi(x, n));
    }
  }
}

TEST_CASE("property: n-adic membership and round trip") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<long> num(-1000, 1000), den(1, 200);
  for (long n : {2L, 3L, 6L}) {
    for (int t = 0; t < 400; ++t) {
      Rational q(num(rng), den(rng));
      auto a = to_nadic(q, n);
      CHECK(a.has_value() == oracle::is_nadic(q, n));
      if (a) {
        CHECK(a->value() == q);
        CHECK((a->exponent() == 0 || a->mantissa() % n != 0));
      }
    }
  }
}

TEST_CASE("property: omega_K is invariant under nu_n") {
  std::mt19937_64 rng(3);
  for (long n : {2L, 3L}) {
    std::uniform_int_distribution<long> num(1, 4000);
    for (int t = 0; t < 300; ++t) {
      Rational x = (Rational(num(rng)) / Rational::power(n, 7)).mod(Rational(n - 1));
      auto a = *to_nadic(x, n);
      for (long K = 0; K < a.exponent(); ++K) {
        auto shifted = *to_nadic((Rational(n) * x).mod(Rational(n - 1)), n);
        CHECK(omega_K(a, K) == omega_K(shifted, K));
      }
    }
  }
}
