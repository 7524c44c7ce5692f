// Normalized rational functions: reduced fraction, monic denominator under the
// grlex order, so structural equality coincides with equality of functions.
#pragma once

#include <map>
#include <optional>
#include <vector>

#include "chow/poly.hpp"

namespace chow {

struct ZeroDenominator : AlgebraError {
  using AlgebraError::AlgebraError;
};
struct UnsupportedLocus : AlgebraError {
  using AlgebraError::AlgebraError;
};

class RatFunc {
 public:
  RatFunc() = default;  // zero
  RatFunc(MPoly num, MPoly den);  // normalizes; throws ZeroDenominator
  explicit RatFunc(MPoly p);
  explicit RatFunc(const Rat& q);
  explicit RatFunc(long v);
  static RatFunc sym(int s);

  const MPoly& num() const { return num_; }
  const MPoly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const;
  bool is_constant() const;       // constant over Q
  bool involves(int sym) const;
  std::vector<int> support() const;
  // constant with respect to the cycle parameters x,y,z
  bool is_cycle_constant() const;

  RatFunc operator-() const;
  RatFunc operator+(const RatFunc&) const;
  RatFunc operator-(const RatFunc&) const;
  RatFunc operator*(const RatFunc&) const;
  RatFunc operator/(const RatFunc&) const;  // throws ZeroDenominator on /0
  RatFunc inverse() const;
  RatFunc pow(int k) const;
  RatFunc derivative(int sym) const;
  bool operator==(const RatFunc&) const = default;

  static int cmp(const RatFunc& f, const RatFunc& g);

  std::string str() const;

 private:
  MPoly num_;          // reduced against den_
  MPoly den_{Rat(1)};  // monic, nonzero
};

inline bool ratfunc_less(const RatFunc& f, const RatFunc& g) { return RatFunc::cmp(f, g) < 0; }

// Value in P^1 = Q(...) together with the point at infinity.
struct ExtValue {
  bool infinite = false;
  RatFunc v;  // meaningful iff !infinite
  static ExtValue inf() { return {true, RatFunc()}; }
  static ExtValue fin(RatFunc f) { return {false, std::move(f)}; }
};

using Subst = std::map<int, RatFunc>;  // symbol -> replacement

// Substitute into a polynomial (result is a genuine RatFunc: denominators of
// the replacements are nonzero polynomials).
RatFunc subst_poly(const MPoly& p, const Subst& s);
// Substitute into a rational function; the image may be the constant infinity.
// Throws AlgebraError on the indeterminate 0/0 case.
ExtValue subst_ext(const RatFunc& f, const Subst& s);
// Substitution that must stay finite (reparametrizations, parameter moves).
RatFunc substitute(const RatFunc& f, const Subst& s);

// Exact evaluation at a rational point; infinite when the denominator
// vanishes, error on 0/0.
struct RatOrInf {
  bool infinite = false;
  Rat v;
};
RatOrInf specialize(const RatFunc& f, const std::array<Rat, kNumSyms>& vals);

// One solution branch of p = 0 with respect to a symbol: sym = expr, with
// multiplicity. expr involves the remaining symbols only.
struct Branch {
  RatFunc expr;
  int mult = 1;
};
struct BranchDecomp {
  std::vector<Branch> branches;   // solutions in the chosen symbol
  MPoly content;                  // factor of p free of the chosen symbol
};
// Solve p = 0 for sym. Requires p != 0. Handles degree <= 2 (after stripping
// the sym^k monomial factor and the sym-free content) via exact discriminant
// square roots; throws UnsupportedLocus otherwise.
BranchDecomp solve_branches(const MPoly& p, int sym);

}  // namespace chow
