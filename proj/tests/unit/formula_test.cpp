#include "doctest.h"

#include <cmath>

#include "istat/errors.hpp"
#include "istat/formula.hpp"

using namespace istat;
using M = Formula::Monotonicity;

TEST_CASE("formula evaluation") {
  CHECK(Formula::parse("inv(k)").eval(4) == doctest::Approx(0.25));
  CHECK(Formula::parse("invval(2,k)").eval(12) == doctest::Approx(1.0 / 3));
  CHECK(Formula::parse("val(3,k)").eval(54) == doctest::Approx(3));
  CHECK(Formula::parse("pow(-1,k)*(1+inv(k))").eval(2) == doctest::Approx(1.5));
  CHECK(Formula::parse("2*k^2-3").eval(3) == doctest::Approx(15));
  CHECK(Formula::parse("-k^2").eval(3) == doctest::Approx(-9));
  CHECK(Formula::parse("2^3^2").eval(1) == doctest::Approx(512));
  CHECK(Formula::parse("mod(k,3)").eval(7) == doctest::Approx(1));
  CHECK(Formula::parse("isqrt(k)").eval(99) == doctest::Approx(9));
  CHECK(Formula::parse("1-inv(k)").eval(5) == doctest::Approx(0.8));
}

TEST_CASE("non-finite values are rejected") {
  CHECK_THROWS_AS(Formula::parse("inv(k-1)").eval(1), std::domain_error);
}

TEST_CASE("parse errors carry positions") {
  CHECK_THROWS_AS(Formula::parse("k+"), ParseError);
  CHECK_THROWS_AS(Formula::parse("pow(2,k)"), ParseError);
  CHECK_THROWS_AS(Formula::parse("invval(1,k)"), ParseError);
  CHECK_THROWS_AS(Formula::parse("foo(k)"), ParseError);
  try {
    Formula::parse("k * )");
  } catch (const ParseError& e) {
    CHECK(e.position() == 4);
  }
}

TEST_CASE("printing round-trips") {
  for (const char* text : {"k", "inv(k)", "1-inv(k)", "-k", "pow(0.5,k)", "(k+1)*(k-1)", "2^3^2", "(2^3)^2",
                           "k-(1-k)", "invval(2,k)", "-(-3)", "0.1+k/7"}) {
    const auto f = Formula::parse(text);
    const auto g = Formula::parse(f.to_string());
    CAPTURE(text);
    CHECK(f.to_string() == g.to_string());
    for (std::uint64_t k : {1u, 2u, 5u, 64u}) CHECK(f.eval(k) == g.eval(k));
  }
}

TEST_CASE("monotonicity from structure") {
  CHECK(Formula::parse("3").monotonicity() == M::Constant);
  CHECK(Formula::parse("k").monotonicity() == M::NonDecreasing);
  CHECK(Formula::parse("inv(k)").monotonicity() == M::NonIncreasing);
  CHECK(Formula::parse("1-inv(k)").monotonicity() == M::NonDecreasing);
  CHECK(Formula::parse("-k").monotonicity() == M::NonIncreasing);
  CHECK(Formula::parse("pow(0.5,k)").monotonicity() == M::NonIncreasing);
  CHECK(Formula::parse("k^2").monotonicity() == M::NonDecreasing);
  CHECK(Formula::parse("pow(-1,k)").monotonicity() == M::Unknown);
  CHECK(Formula::parse("invval(2,k)").monotonicity() == M::Unknown);
  std::uint64_t b = 0;
  CHECK(Formula::parse("invval(3,k)").is_inverse_valuation(b));
  CHECK(b == 3);
  CHECK(Formula::parse("k").negated().eval(4) == -4);
}

TEST_CASE("negative-base powers split by parity") {
  const auto f = Formula::parse("pow(-0.5,k)+inv(k)");
  const auto even = f.on_parity(true);
  const auto odd = f.on_parity(false);
  REQUIRE(even);
  REQUIRE(odd);
  CHECK(even->monotonicity() == M::NonIncreasing);
  for (std::uint64_t k = 1; k <= 12; ++k) CHECK(f.eval(k) == doctest::Approx((k % 2 ? *odd : *even).eval(k)));
  CHECK_FALSE(Formula::parse("inv(k)").on_parity(true));
  CHECK_FALSE(Formula::parse("pow(-1,2*k)").on_parity(true));
}
