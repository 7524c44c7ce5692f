// Proof-script DSL: a small statement language for binding cycles and
// substitutions, asserting the checkable properties (admissibility,
// negligibility, equality via substitution, equality modulo discards with an
// explicit boundary witness, boundary values), evaluating cycles to constant
// classes, and replaying the ten-step chain and the final relation.
//
// Grammar (comments start with '#', statements end at end of line):
//   stmt    := let | assert | eval | replay
//   let     := 'let' NAME '=' 'cycle' CYCLE
//            | 'let' NAME '=' 'subst' '(' maps ';' maps ')'
//   maps    := SYM '->' EXPR (',' SYM '->' EXPR)*
//   assert  := 'assert' 'admissible' NAME
//            | 'assert' 'negligible' NAME
//            | 'assert' 'equal' NAME '=' SUM ('via' NAME)? ('witness' NAME+)?
//            | 'assert' 'boundary' NAME '=' (SUM | '0')
//   eval    := 'eval' NAME ('via' NAME)?
//   replay  := 'replay' 'step' INT | 'replay' 'theorem'
//   SUM     := ('-')? TERM (('+'|'-') TERM)*,  TERM := (INT '*')? NAME | '0'
// CYCLE uses the cycle text form "coeff * [e1, ..., en] params (x,y)"; EXPR
// is the shared expression grammar.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "chow/goncharov.hpp"
#include "chow/rewrite.hpp"

namespace chow {

struct SyntaxError : ParseError {
  SyntaxError(const std::string& what, int line, int column);
  int line;
  int column;
};

struct Statement {
  enum class Kind {
    kLetCycle,
    kLetSubst,
    kAssertAdmissible,
    kAssertNegligible,
    kAssertEqual,
    kAssertBoundary,
    kEval,
    kReplayStep,
    kReplayTheorem,
  };
  Kind kind;
  int line = 0;
  std::string text;                  // source line, trimmed
  std::string name;                  // bound or inspected name
  CycleTerm cycle;                   // kLetCycle payload
  std::optional<Substitution> subst; // kLetSubst payload
  // kAssertEqual / kAssertBoundary right-hand side: signed named terms
  std::vector<std::pair<Rat, std::string>> sum;
  std::optional<std::string> via;    // substitution name
  std::vector<std::string> witness;  // witness cycle names
  int step = 0;                      // kReplayStep payload
};

struct Script {
  std::vector<Statement> statements;
};

Script parse_script(const std::string& text);

struct RunOptions {
  // Values for a, b, c; empty means the symbolic run.
  Subst specialize;
  // Restrict replay statements to this inclusive step range.
  std::optional<std::pair<int, int>> steps;
  unsigned seed = 0;
};

struct StatementResult {
  int index = 0;
  int line = 0;
  std::string text;
  std::string status;  // "verified", "failed" or "error"
  std::string message;
  Cert certificate = Cert::object();
  double seconds = 0;  // human-readable output only, never serialized
};

struct RunReport {
  bool pass = true;
  std::vector<StatementResult> statements;
  Cert to_json() const;  // deterministic; schema 1; rationals as "p/q" strings
  std::string str() const;
};

RunReport run(const Script& script, const RunOptions& options);

// Text of a script shipped with the tool (currently "theorem41.gcs", the full
// replay of the ten-step chain and the final relation); empty if unknown.
std::string bundled_script(const std::string& name);

}  // namespace chow
