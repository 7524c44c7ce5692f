// Shared helpers for the test suites: seeded random rationals, random Möbius
// reparametrizations, and the admissible two-parameter template family.
#pragma once

#include <cstdlib>
#include <random>

#include "chow/boundary.hpp"

namespace chow::testutil {

inline unsigned seed_from_env(unsigned fallback = 12345u) {
  if (const char* s = std::getenv("CHOW_SEED")) return unsigned(std::strtoul(s, nullptr, 10));
  return fallback;
}

inline Rat random_rat(std::mt19937& rng, int lo = -9, int hi = 9) {
  std::uniform_int_distribution<int> num(lo, hi);
  std::uniform_int_distribution<int> den(1, 9);
  Rat q(num(rng), den(rng));
  q.canonicalize();
  return q;
}

inline Rat random_nonzero_rat(std::mt19937& rng, int lo = -9, int hi = 9) {
  for (;;) {
    Rat q = random_rat(rng, lo, hi);
    if (q != 0) return q;
  }
}

// Invertible Möbius change of one parameter: s -> (p*s + q)/(r*s + w).
inline Substitution random_moebius(std::mt19937& rng, int sym) {
  for (;;) {
    Rat p = random_rat(rng, -4, 4), q = random_rat(rng, -4, 4);
    Rat r = random_rat(rng, -4, 4), w = random_rat(rng, -4, 4);
    if (p * w - q * r == 0) continue;
    RatFunc s = RatFunc::sym(sym);
    RatFunc fwd = (RatFunc(p) * s + RatFunc(q)) / (RatFunc(r) * s + RatFunc(w));
    RatFunc inv = (RatFunc(w) * s - RatFunc(q)) / (RatFunc(-r) * s + RatFunc(p));
    try {
      return Substitution(Subst{{sym, fwd}}, Subst{{sym, inv}});
    } catch (const AlgebraError&) {
      continue;  // degenerate draw (e.g. r*s + w divides out)
    }
  }
}

// The admissible family [x, y, 1 - alpha*x, 1 - y/x, 1 - beta/y].
inline CycleTerm template_term(const Rat& alpha, const Rat& beta) {
  int sx = kFirstCycleSym, sy = kFirstCycleSym + 1;
  RatFunc x = RatFunc::sym(sx), y = RatFunc::sym(sy), one{1};
  return CycleTerm::make(Rat(1),
                         std::vector<RatFunc>{x, y, one - RatFunc(alpha) * x,
                                              one - y / x, one - RatFunc(beta) / y},
                         std::vector<int>{sx, sy});
}

}  // namespace chow::testutil
