#include <doctest.h>

#include <random>

#include "chow/boundary.hpp"
#include "test_util.hpp"

using namespace chow;

namespace {

const int SX = kFirstCycleSym;
const int SY = kFirstCycleSym + 1;

RatFunc X() { return RatFunc::sym(SX); }
RatFunc Y() { return RatFunc::sym(SY); }

}  // namespace

TEST_CASE("boundary of boundary vanishes across a reparametrized family") {
  std::mt19937 rng(testutil::seed_from_env() + 10);
  int checked = 0;
  while (checked < 200) {
    Rat alpha = testutil::random_nonzero_rat(rng);
    Rat beta = testutil::random_nonzero_rat(rng);
    CycleTerm t = testutil::template_term(alpha, beta);
    if (!is_admissible(t).admissible) continue;
    CycleTerm u = t;
    if (checked % 2 == 1) {
      // same cycle presented through a random invertible parameter change
      u = reparametrize(u, testutil::random_moebius(rng, SX));
      u = reparametrize(u, testutil::random_moebius(rng, SY));
      if (!is_admissible(u).admissible) continue;
    }
    ++checked;
    CycleSum db = boundary(boundary(u));
    CHECK_MESSAGE(db.is_zero(), "d(d(", u.str(), ")) = ", db.str());
  }
  CHECK(checked == 200);
}

TEST_CASE("boundary of a curve recovers its divisor") {
  // [x, 1 - x] with x free: only t1 = 0 and t1 = inf give points, and both
  // land on a coordinate equal to 1, so the boundary vanishes.
  CycleTerm t = CycleTerm::make(Rat(1), {X(), RatFunc(1) - X()}, {SX});
  CHECK(boundary(t).is_zero());

  // [x, 1 - 2*x]: the face x = 0 gives the point [1] which dies (coordinate
  // 1); the face t2 = 0 gives x = 1/2, the point [1/2]; t2 = inf is empty.
  CycleTerm u = CycleTerm::make(Rat(1), {X(), RatFunc(1) - RatFunc(2) * X()}, {SX});
  CycleSum expect;
  expect.add(CycleTerm::make(Rat(-1), std::vector<RatFunc>{RatFunc(Rat(1, 2))},
                             std::vector<int>{}));
  CHECK(boundary(u) == expect);
}

TEST_CASE("face restriction splits into locus branches") {
  // t3 = 1 - y/(x+1) vanishes on the line y = x + 1.
  CycleTerm t = CycleTerm::make(
      Rat(1), {X(), Y(), RatFunc(1) - Y() / (X() + RatFunc(1))}, {SX, SY});
  CycleSum r = face_restrict(t, Face{2, 0});
  CycleSum expect;
  expect.add(CycleTerm::make(Rat(1), {X(), X() + RatFunc(1)}, {SX}));
  CHECK(r == expect);

  // a quadratic constraint with two rational branches: y = 2x and y = 3x
  CycleTerm q = CycleTerm::make(
      Rat(1), {X(), Y(), RatFunc(1) - (Y() - RatFunc(2) * X()) * (Y() - RatFunc(3) * X())},
      {SX, SY});
  CycleSum r2 = face_restrict(q, Face{2, 0});
  CHECK(r2.size() == 2);
}

TEST_CASE("admissibility rejects a cycle meeting a face improperly") {
  // [x, 0, 1 - x] lies entirely inside the face t2 = 0: a 1-dimensional
  // intersection where at most a 0-dimensional one is allowed.
  CycleTerm bad = CycleTerm::make(
      Rat(1), {X(), RatFunc(), RatFunc(1) - X()}, {SX});
  AdmissibilityReport rep = is_admissible(bad);
  CHECK(!rep.admissible);
  CHECK(!rep.violations.empty());

  CycleTerm good = testutil::template_term(Rat(2), Rat(3));
  CHECK(is_admissible(good).admissible);
}

TEST_CASE("negligible patterns are detected") {
  // a coordinate constant in the cycle parameters
  CycleTerm c = CycleTerm::make(
      Rat(1), {X(), RatFunc(Rat(5)), RatFunc(1) - X()}, {SX});
  NegligibilityReport nc = is_negligible(c);
  CHECK(nc.negligible);
  CHECK(nc.pattern == "constant_coordinate");
  CHECK(nc.coordinate == 1);

  // a product of two blocks in disjoint parameters
  CycleTerm p = CycleTerm::make(
      Rat(1), {X(), RatFunc(1) - X(), Y(), RatFunc(1) - Y()}, {SX, SY});
  NegligibilityReport np = is_negligible(p);
  CHECK(np.negligible);
  CHECK(np.pattern == "disjoint_product");

  CHECK(!is_negligible(testutil::template_term(Rat(2), Rat(3))).negligible);
}

TEST_CASE("degenerate parametrizations are flagged") {
  CycleTerm d = CycleTerm::make(
      Rat(1), {X() * Y(), RatFunc(1) - X() * Y(), X() * Y() + RatFunc(1)},
      {SX, SY});
  DegeneracyReport rep = is_degenerate(d);
  CHECK(rep.degenerate);
  CHECK(rep.rank == 1);
  CHECK(!is_degenerate(testutil::template_term(Rat(2), Rat(3))).degenerate);
}

TEST_CASE("face containment certifies vanishing restrictions") {
  CycleTerm t = testutil::template_term(Rat(2), Rat(3));
  // the x = 0 face of [x, y, 1-2x, 1-y/x, 1-3/y] lies in {t3 = 1}
  auto c = face_containment(t, Face{0, 0});
  REQUIRE(c.has_value());
  CHECK(*c == std::vector<int>{2});
  // a face that genuinely contributes has no containment certificate
  CHECK(!face_containment(t, Face{2, 0}).has_value());
}
