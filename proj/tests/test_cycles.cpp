#include <doctest.h>

#include <algorithm>
#include <random>

#include "chow/cycles.hpp"
#include "test_util.hpp"

using namespace chow;

namespace {

const int SX = kFirstCycleSym;
const int SY = kFirstCycleSym + 1;
const int SZ = kFirstCycleSym + 2;

CycleTerm random_term(std::mt19937& rng, int n_coords) {
  RatFunc x = RatFunc::sym(SX);
  RatFunc y = RatFunc::sym(SY);
  std::vector<RatFunc> coords;
  std::uniform_int_distribution<int> pick(0, 5);
  for (int i = 0; i < n_coords; ++i) {
    Rat a = testutil::random_nonzero_rat(rng);
    Rat b = testutil::random_rat(rng);
    switch (pick(rng)) {
      case 0: coords.push_back(RatFunc(a) * x + RatFunc(b)); break;
      case 1: coords.push_back(RatFunc(a) * y + RatFunc(b)); break;
      case 2: coords.push_back(RatFunc(a) * x * y + RatFunc(b)); break;
      case 3: coords.push_back((RatFunc(a) * x + RatFunc(b)) / y); break;
      case 4: coords.push_back(RatFunc(1) - RatFunc(a) * y / x); break;
      default: coords.push_back(RatFunc(a) + x + y); break;
    }
  }
  return CycleTerm::make(testutil::random_nonzero_rat(rng), coords, {SX, SY});
}

}  // namespace

TEST_CASE("alternation: swapping coordinates flips the sign") {
  std::mt19937 rng(testutil::seed_from_env());
  std::uniform_int_distribution<int> len(2, 5);
  int checked = 0;
  while (checked < 500) {
    CycleTerm t = random_term(rng, len(rng));
    auto nt = normalize_term(t);
    if (!nt) continue;
    ++checked;
    CycleTerm swapped = t;
    std::uniform_int_distribution<int> at(0, t.n() - 2);
    int i = at(rng);
    std::swap(swapped.coords[i], swapped.coords[i + 1]);
    swapped.coeff = -swapped.coeff;
    auto ns = normalize_term(swapped);
    REQUIRE(ns.has_value());
    CHECK(term_key(*ns) == term_key(*nt));
    CHECK(ns->coeff == nt->coeff);
    CHECK(eq_mod_alternation(t, swapped));
  }
  CHECK(checked == 500);
}

TEST_CASE("alternation: inverting a coordinate flips the sign") {
  std::mt19937 rng(testutil::seed_from_env() + 1);
  std::uniform_int_distribution<int> len(2, 5);
  int checked = 0;
  while (checked < 500) {
    CycleTerm t = random_term(rng, len(rng));
    auto nt = normalize_term(t);
    if (!nt) continue;
    std::uniform_int_distribution<int> at(0, t.n() - 1);
    int i = at(rng);
    if (t.coords[i].is_zero()) continue;
    ++checked;
    CycleTerm inv = t;
    inv.coords[i] = inv.coords[i].inverse();
    inv.coeff = -inv.coeff;
    CHECK(eq_mod_alternation(t, inv));
  }
  CHECK(checked == 500);
}

TEST_CASE("terms with a coordinate equal to 1 or a repeated coordinate vanish") {
  RatFunc x = RatFunc::sym(SX);
  RatFunc y = RatFunc::sym(SY);
  CHECK(!normalize_term(
      CycleTerm::make(Rat(1), {x, RatFunc(1), y}, {SX, SY})));
  CHECK(!normalize_term(CycleTerm::make(Rat(1), {x, y, x}, {SX, SY})));
  // even self-symmetry survives, odd does not: [x, 1/x] = -[1/x, x] = -[x, 1/x]
  CHECK(!normalize_term(
      CycleTerm::make(Rat(1), {x, x.inverse()}, {SX})));
}

TEST_CASE("infinite coordinates fold to zero with a sign") {
  RatFunc x = RatFunc::sym(SX);
  CycleTerm a = CycleTerm::make(
      Rat(1), std::vector<ExtValue>{ExtValue::fin(x), ExtValue::inf()}, {SX});
  CycleTerm b = CycleTerm::make(
      Rat(-1), std::vector<RatFunc>{x, RatFunc()}, {SX});
  CHECK(eq_mod_alternation(a, b));
}

TEST_CASE("cycle sums cancel and form an abelian group") {
  std::mt19937 rng(testutil::seed_from_env() + 2);
  for (int rep = 0; rep < 50; ++rep) {
    CycleSum s;
    std::vector<CycleTerm> terms;
    for (int i = 0; i < 6; ++i) terms.push_back(random_term(rng, 3));
    for (const auto& t : terms) s.add(t);
    CycleSum neg = -s;
    CHECK((s + neg).is_zero());
    CHECK(s - s == CycleSum());
    CHECK(s * Rat(0) == CycleSum());
    CHECK(s + s == s * Rat(2));
  }
}

TEST_CASE("reparametrization preserves the cycle sum") {
  std::mt19937 rng(testutil::seed_from_env() + 3);
  int checked = 0;
  while (checked < 100) {
    CycleTerm t = random_term(rng, 4);
    if (!normalize_term(t)) continue;
    ++checked;
    Substitution mx = testutil::random_moebius(rng, SX);
    CycleTerm image = reparametrize(t, mx);
    CHECK(eq_mod_alternation(reparametrize(image, Substitution(mx.inv, mx.fwd)), t));
  }
  CHECK(checked == 100);
  // a substitution that is not invertible is rejected at construction
  CHECK_THROWS_AS(Substitution({{SX, RatFunc(2)}}, {{SX, RatFunc::sym(SX)}}),
                  AlgebraError);
}

TEST_CASE("parameter renaming is canonical") {
  RatFunc z = RatFunc::sym(SZ);
  CycleTerm t = CycleTerm::make(Rat(1), {z, RatFunc(1) - z}, {SZ});
  auto nt = normalize_term(t);
  REQUIRE(nt.has_value());
  CHECK(nt->params == std::vector<int>{SX});
}

TEST_CASE("cycle text round trip") {
  std::mt19937 rng(testutil::seed_from_env() + 4);
  for (int rep = 0; rep < 100; ++rep) {
    CycleTerm t = random_term(rng, 4);
    CycleTerm back = parse_cycle(format_cycle(t));
    CHECK(eq_mod_alternation(t, back));
    CHECK(format_cycle(back) == format_cycle(t));
  }
  CHECK_THROWS_AS(parse_cycle("cycle [x,]"), ParseError);
  CHECK_THROWS_AS(parse_cycle("[x, y params (x)"), ParseError);
}
