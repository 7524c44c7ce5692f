#include <doctest.h>

#include <random>

#include "chow/expr.hpp"
#include "test_util.hpp"

using namespace chow;

TEST_CASE("expression parse/format round trip") {
  for (const char* text : {
           "x", "1 - x", "1 - y/x", "(a*x - a + 1)/a", "b*x - x + 1",
           "-(a*b - b + 1)/a", "(a*b*x + 1)/(a*x - a + 1)", "x^2 - 2*x + 1",
           "1/2", "-3/7", "(y - x)/(y*(b*x - x + 1))",
       }) {
    RatFunc f = parse_ratfunc(text);
    CHECK(parse_ratfunc(format_ratfunc(f)) == f);
    // formatting is canonical: a second round trip is bit-stable
    CHECK(format_ratfunc(parse_ratfunc(format_ratfunc(f))) == format_ratfunc(f));
  }
}

TEST_CASE("parse errors carry a message") {
  CHECK_THROWS_AS(parse_ratfunc("x +"), ParseError);
  CHECK_THROWS_AS(parse_ratfunc("(x"), ParseError);
  CHECK_THROWS_AS(parse_ratfunc("q"), ParseError);
  CHECK_THROWS_AS(parse_ratfunc(""), ParseError);
}

TEST_CASE("rational functions are reduced with monic denominator") {
  RatFunc f = parse_ratfunc("(x^2 - 1)/(x - 1)");
  CHECK(f == parse_ratfunc("x + 1"));
  RatFunc g = parse_ratfunc("(2*x + 2)/(2*x - 2)");
  CHECK(g == parse_ratfunc("(x + 1)/(x - 1)"));
  CHECK(g.den().lead_coeff() == 1);
}

TEST_CASE("field arithmetic properties on random values") {
  std::mt19937 rng(testutil::seed_from_env());
  RatFunc x = RatFunc::sym(kFirstCycleSym);
  for (int i = 0; i < 100; ++i) {
    RatFunc f = RatFunc(testutil::random_rat(rng)) * x + RatFunc(testutil::random_rat(rng));
    RatFunc g = RatFunc(testutil::random_rat(rng)) * x + RatFunc(testutil::random_rat(rng));
    CHECK((f + g) - g == f);
    if (!g.is_zero()) {
      CHECK((f * g) / g == f);
      CHECK(g * g.inverse() == RatFunc(1));
    }
    CHECK(-(-f) == f);
    CHECK(f - f == RatFunc());
  }
}

TEST_CASE("division by zero throws") {
  RatFunc x = RatFunc::sym(kFirstCycleSym);
  CHECK_THROWS_AS(x / RatFunc(), ZeroDenominator);
  CHECK_THROWS_AS(RatFunc().inverse(), ZeroDenominator);
}

TEST_CASE("substitution composes with evaluation") {
  int sx = kFirstCycleSym;
  RatFunc x = RatFunc::sym(sx);
  RatFunc f = (x + RatFunc(1)) / (x - RatFunc(2));
  Subst s{{sx, RatFunc(5)}};
  CHECK(substitute(f, s) == RatFunc(2));
  Subst pole{{sx, RatFunc(2)}};
  CHECK_THROWS_AS(substitute(f, pole), ZeroDenominator);
}
