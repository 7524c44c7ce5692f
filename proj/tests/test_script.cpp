#include <doctest.h>

#include "chow/script.hpp"

using namespace chow;

TEST_CASE("scripts parse statement by statement") {
  Script s = parse_script(
      "# a comment\n"
      "let Ca = cycle [x, y, 1-x, 1-y/x, 1-a/y] params (x,y)\n"
      "assert admissible Ca\n"
      "replay step 3\n"
      "replay theorem\n");
  REQUIRE(s.statements.size() == 4);
  CHECK(s.statements[0].kind == Statement::kLetCycle);
  CHECK(s.statements[0].name == "Ca");
  CHECK(s.statements[1].kind == Statement::kAssertAdmissible);
  CHECK(s.statements[2].kind == Statement::kReplayStep);
  CHECK(s.statements[2].step == 3);
  CHECK(s.statements[3].kind == Statement::kReplayTheorem);
}

TEST_CASE("malformed statements raise a positioned syntax error") {
  try {
    parse_script("let Z = cycle [x,] params (x)\n");
    FAIL("expected SyntaxError");
  } catch (const SyntaxError& e) {
    CHECK(e.line == 1);
    CHECK(e.column > 0);
  }
  CHECK_THROWS_AS(parse_script("assert admissible Missing\n"), SyntaxError);
  CHECK_THROWS_AS(parse_script("let A = cycle [x] params (x)\n"
                               "let A = cycle [y] params (y)\n"),
                  SyntaxError);
  CHECK_THROWS_AS(parse_script("replay step 0\n"), SyntaxError);
  CHECK_THROWS_AS(parse_script("frobnicate\n"), SyntaxError);
}

TEST_CASE("running a script yields one verdict per statement") {
  Script s = parse_script(
      "let Ca = cycle [x, y, 1-x, 1-y/x, 1-a/y] params (x,y)\n"
      "let Cb = cycle [x, y, 1-x, 1-y/x, 1-b/y] params (x,y)\n"
      "assert admissible Ca\n"
      "assert admissible Cb\n"
      "let K = cycle [x, 3, 1-x] params (x)\n"
      "assert negligible K\n");
  RunOptions opt;
  RunReport rep = run(s, opt);
  CHECK(rep.pass);
  REQUIRE(rep.statements.size() == 6);
  for (const StatementResult& r : rep.statements) CHECK(r.status == "verified");
}

TEST_CASE("a failing assertion reports a residue instead of throwing") {
  Script s = parse_script(
      "let Ca = cycle [x, y, 1-x, 1-y/x, 1-a/y] params (x,y)\n"
      "let Cb = cycle [x, y, 1-x, 1-y/x, 1-b/y] params (x,y)\n"
      "assert equal Ca = Cb\n");
  RunOptions opt;
  RunReport rep = run(s, opt);
  CHECK(!rep.pass);
  CHECK(rep.statements[2].status == "failed");
  CHECK(!rep.statements[2].message.empty());
}

TEST_CASE("specialized runs substitute the field parameters") {
  Script s = parse_script(
      "let Ca = cycle [x, y, 1-x, 1-y/x, 1-a/y] params (x,y)\n"
      "assert admissible Ca\n");
  RunOptions opt;
  opt.specialize[sym_index('a')] = RatFunc(Rat(7, 2));
  RunReport rep = run(s, opt);
  CHECK(rep.pass);
}

TEST_CASE("json reports are schema-stable and timing-free") {
  Script s = parse_script(
      "let Ca = cycle [x, y, 1-x, 1-y/x, 1-a/y] params (x,y)\n"
      "assert admissible Ca\n");
  RunOptions opt;
  Cert j1 = run(s, opt).to_json();
  Cert j2 = run(s, opt).to_json();
  CHECK(j1["schema"] == 1);
  CHECK(j1.dump() == j2.dump());  // byte-identical across runs
  CHECK(j1.dump().find("seconds") == std::string::npos);
}

TEST_CASE("the bundled theorem script exists and parses") {
  std::string text = bundled_script("theorem41.gcs");
  Script s = parse_script(text);
  CHECK(!s.statements.empty());
  CHECK(s.statements.back().kind == Statement::kReplayTheorem);
}

TEST_CASE("replay steps honor a step range filter") {
  Script s = parse_script("replay step 2\nreplay step 9\n");
  RunOptions opt;
  opt.steps = std::pair<int, int>{1, 3};
  RunReport rep = run(s, opt);
  CHECK(rep.pass);
  CHECK(rep.statements[0].status == "verified");
  CHECK(rep.statements[1].message == "skipped by --steps");
  CHECK(rep.statements[1].certificate["skipped"] == true);
}
