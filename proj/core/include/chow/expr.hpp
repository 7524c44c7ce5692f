// Tiny expression grammar shared by the CLI and the test fixtures:
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := '-' factor | base ('^' integer)?
//   base   := integer | symbol | '(' expr ')'
// Symbols are the single letters a b c s t u v x y z.  format(parse(s)) and
// parse(format(f)) are exact round trips.
#pragma once

#include <string>

#include "chow/ratfunc.hpp"

namespace chow {

struct ParseError : AlgebraError {
  using AlgebraError::AlgebraError;
};

RatFunc parse_ratfunc(const std::string& text);
inline std::string format_ratfunc(const RatFunc& f) { return f.str(); }

}  // namespace chow
