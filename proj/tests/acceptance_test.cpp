// End-to-end acceptance battery: one pass/fail line per criterion.
// Exits nonzero when any criterion fails.
#include <array>
#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "chow/goncharov.hpp"
#include "chow/script.hpp"
#include "test_util.hpp"

using namespace chow;

namespace {

const int SX = kFirstCycleSym;
const int SY = kFirstCycleSym + 1;

int g_failures = 0;

void report(int n, const std::string& name, bool ok, const std::string& note) {
  std::cout << "criterion " << n << " (" << name << "): "
            << (ok ? "PASS" : "FAIL");
  if (!note.empty()) std::cout << " — " << note;
  std::cout << std::endl;
  if (!ok) ++g_failures;
}

void run_criterion(int n, const std::string& name,
                   const std::function<std::string()>& body) {
  try {
    std::string note = body();
    report(n, name, true, note);
  } catch (const std::exception& e) {
    report(n, name, false, e.what());
  }
}

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
  }
};

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::runtime_error(msg);
}

std::string fmt_secs(double s) {
  std::ostringstream os;
  os.precision(1);
  os << std::fixed << s << "s";
  return os.str();
}

// ---------------------------------------------------------------------------

std::string c1_template_lemma() {
  Timer tm;
  Cert cert = verify_stuv_lemma();
  double dt = tm.seconds();
  require(dt < 10.0, "exceeded 10s: " + fmt_secs(dt));
  return "both template identities, " + fmt_secs(dt);
}

std::string c2_symbolic_replay() {
  Timer tm;
  ReplayContext ctx = ReplayContext::symbolic();
  for (int k = 1; k <= 10; ++k) {
    ReplayContext::StepResult r = ctx.replay_step(k);
    require(r.verified, "step " + std::to_string(k) + " failed");
  }
  TheoremReport rep = verify_theorem(ctx);
  require(rep.verified, "theorem residual nonzero: " + rep.residual.str());
  require(rep.residual.empty(), "residual not empty");
  double dt = tm.seconds();
  require(dt < 300.0, "exceeded 5min: " + fmt_secs(dt));
  return "10 steps + full theorem, empty residual, " + fmt_secs(dt);
}

std::string c3_admissibility() {
  ReplayContext ctx = ReplayContext::symbolic();
  int count = 0;
  for (const auto& [name, cyc] : ctx.catalog()) {
    AdmissibilityReport rep = is_admissible(cyc);
    require(rep.admissible, name + " not admissible: " + rep.summary());
    ++count;
  }
  // the seven vanishing codimension-one faces of the doubled-argument cycle,
  // each contained in coordinate hyperplanes {t_j = 1}
  CycleTerm za = ctx.ZA();
  struct Want {
    Face f;
    std::vector<int> ones;
  };
  std::vector<Want> wants{
      {{0, 0}, {3}}, {{0, 1}, {2}}, {{1, 0}, {4}}, {{1, 1}, {3}},
      {{2, 1}, {3}}, {{3, 1}, {2, 4}}, {{4, 1}, {3}},
  };
  for (const Want& w : wants) {
    auto got = face_containment(za, w.f);
    require(got.has_value(), "face containment missing");
    require(*got == w.ones, "face containment mismatch");
  }
  // the one contributing face splits into exactly the two rational branches
  CycleSum d50 = face_restrict(za, Face{4, 0});
  require(d50.size() == 2, "fifth-coordinate face is not two branches");
  Subst b1{{SY, ctx.c()}};
  Subst b2{{SY, ctx.y2()}};
  CycleSum expect;
  for (const Subst& b : {b1, b2}) {
    std::vector<RatFunc> coords;
    for (int i = 0; i < 4; ++i) coords.push_back(substitute(za.coords[i], b));
    expect.add(CycleTerm::make(za.coeff, coords, {SX}));
  }
  require(d50 == expect, "branch points are not y = c and y = y2");
  return std::to_string(count) + " catalog cycles admissible; 7 contained faces; 2 branches";
}

std::string c4_involutions() {
  ReplayContext ctx = ReplayContext::symbolic();
  Cert cert = ctx.check_involution_tables();
  return std::to_string(cert.size()) + " table rows";
}

std::string c5_properties() {
  std::mt19937 rng(testutil::seed_from_env() + 40);

  int dd = 0;
  while (dd < 200) {
    CycleTerm t = testutil::template_term(testutil::random_nonzero_rat(rng),
                                          testutil::random_nonzero_rat(rng));
    if (!is_admissible(t).admissible) continue;
    if (dd % 2 == 1) {
      t = reparametrize(t, testutil::random_moebius(rng, SX));
      t = reparametrize(t, testutil::random_moebius(rng, SY));
      if (!is_admissible(t).admissible) continue;
    }
    require(boundary(boundary(t)).is_zero(), "d(d(t)) != 0 for " + t.str());
    ++dd;
  }

  RatFunc x = RatFunc::sym(SX), y = RatFunc::sym(SY);
  int alt = 0;
  while (alt < 500) {
    std::vector<RatFunc> coords;
    std::uniform_int_distribution<int> len(2, 5);
    int n = len(rng);
    for (int i = 0; i < n; ++i) {
      RatFunc base = (i % 2 == 0) ? x : y;
      coords.push_back(RatFunc(testutil::random_nonzero_rat(rng)) * base +
                       RatFunc(testutil::random_rat(rng)));
    }
    CycleTerm t = CycleTerm::make(testutil::random_nonzero_rat(rng), coords, {SX, SY});
    if (!normalize_term(t)) continue;
    std::uniform_int_distribution<int> at(0, n - 2);
    int i = at(rng);
    CycleTerm sw = t;
    std::swap(sw.coords[i], sw.coords[i + 1]);
    sw.coeff = -sw.coeff;
    require(eq_mod_alternation(t, sw), "permutation sign failed");
    CycleTerm inv = t;
    inv.coords[i] = inv.coords[i].inverse();
    inv.coeff = -inv.coeff;
    require(eq_mod_alternation(t, inv), "inversion sign failed");
    ++alt;
  }
  return "d∘d on 200 admissible terms; alternation laws on 500 terms";
}

std::string c6_specialization() {
  std::vector<std::array<Rat, 3>> triples{{Rat(2), Rat(3), Rat(5)}};
  std::mt19937 rng(testutil::seed_from_env() + 41);
  while (triples.size() < 11) {
    Rat a(long(rng() % 29) + 2, long(rng() % 7) + 1);
    Rat b(long(rng() % 29) + 2, long(rng() % 7) + 1);
    Rat c(long(rng() % 29) + 2, long(rng() % 7) + 1);
    try {
      ReplayContext probe{RatFunc(a), RatFunc(b), RatFunc(c)};
      check_nondegenerate(probe);
    } catch (const std::exception&) {
      continue;
    }
    triples.push_back({a, b, c});
  }
  for (const auto& [a, b, c] : triples) {
    ReplayContext ctx{RatFunc(a), RatFunc(b), RatFunc(c)};
    for (int k = 1; k <= 10; ++k) {
      require(ctx.replay_step(k).verified,
              "step " + std::to_string(k) + " failed at (" + rat_str(a) + "," +
                  rat_str(b) + "," + rat_str(c) + ")");
    }
    SymbolSum r = assemble_R(ctx);
    for (const auto& [key, tc] : r.terms()) {
      require(!tc.first.is_zero() && !tc.first.is_one(),
              "relation argument hit 0 or 1");
    }
  }
  return "full chain at (2,3,5) and 10 random triples; 22 arguments generic";
}

std::string c7_kernel() {
  ReplayContext ctx = ReplayContext::symbolic();
  Cert cert = ctx.check_kernel_identities();
  return std::to_string(cert.size()) + " identities";
}

std::string c8_cli() {
  ReplayContext ctx = ReplayContext::symbolic();
  int count = 0;
  for (const auto& [name, cyc] : ctx.catalog()) {
    CycleTerm back = parse_cycle(format_cycle(cyc));
    require(eq_mod_alternation(cyc, back), "round trip changed " + name);
    require(format_cycle(back) == format_cycle(cyc),
            "format not canonical for " + name);
    ++count;
  }
  Script s = parse_script(
      "let Ca = cycle [x, y, 1-x, 1-y/x, 1-a/y] params (x,y)\n"
      "assert admissible Ca\n"
      "replay step 1\n");
  RunOptions opt;
  std::string j1 = run(s, opt).to_json().dump(2);
  std::string j2 = run(s, opt).to_json().dump(2);
  require(j1 == j2, "JSON report not byte-identical across runs");
  return std::to_string(count) + " catalog round trips; reports byte-identical";
}

}  // namespace

int main() {
  run_criterion(1, "one-parameter template lemma", c1_template_lemma);
  run_criterion(2, "symbolic replay and theorem", c2_symbolic_replay);
  run_criterion(3, "admissibility suite", c3_admissibility);
  run_criterion(4, "involution tables", c4_involutions);
  run_criterion(5, "boundary and alternation properties", c5_properties);
  run_criterion(6, "specialization consistency", c6_specialization);
  run_criterion(7, "kernel identities", c7_kernel);
  run_criterion(8, "CLI round trip and determinism", c8_cli);
  std::cout << (g_failures == 0 ? "ALL CRITERIA PASS"
                                : std::to_string(g_failures) + " CRITERIA FAILED")
            << std::endl;
  return g_failures == 0 ? 0 : 1;
}
