// Formal sums of parametrized cycles in the algebraic n-cube, normalized
// modulo the alternation relation: permuting coordinates multiplies by the
// permutation sign, inverting a coordinate flips the sign.  Terms are written
// [f1, ..., fn] with each fi a rational function of the cycle parameters.
#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "chow/expr.hpp"
#include "chow/ratfunc.hpp"

namespace chow {

struct CycleError : AlgebraError {
  using AlgebraError::AlgebraError;
};

struct CycleTerm {
  Rat coeff{1};
  std::vector<RatFunc> coords;
  std::vector<int> params;  // distinct cycle symbols, in declaration order

  int n() const { return int(coords.size()); }
  int d() const { return int(params.size()); }

  // builder folding infinite coordinates: [.., inf, ..] = -[.., 0, ..]
  static CycleTerm make(Rat coeff, std::vector<ExtValue> coords, std::vector<int> params);
  static CycleTerm make(Rat coeff, std::vector<RatFunc> coords, std::vector<int> params);

  std::string str() const;  // "coeff * [f1, ..., fn] params (x,y)"
};

// Alternation-canonical form: coordinates oriented and sorted, parameters
// renamed to the leading cycle symbols, sign absorbed into the coefficient.
// Returns nullopt when the term is zero in the alternating complex (a
// coordinate equal to 1, a repeated coordinate, an odd self-symmetry, or a
// zero coefficient).
std::optional<CycleTerm> normalize_term(const CycleTerm& t);
std::string term_key(const CycleTerm& normalized);  // canonical serialization

class CycleSum {
 public:
  CycleSum() = default;
  CycleSum(const CycleTerm& t) { add(t); }

  void add(const CycleTerm& t);
  void add(const CycleSum& s);
  void sub(const CycleSum& s);
  CycleSum operator+(const CycleSum& o) const;
  CycleSum operator-(const CycleSum& o) const;
  CycleSum operator-() const;
  CycleSum operator*(const Rat& c) const;

  bool is_zero() const { return terms_.empty(); }
  size_t size() const { return terms_.size(); }
  const std::map<std::string, CycleTerm>& terms() const { return terms_; }
  bool operator==(const CycleSum& o) const;

  std::string str() const;

 private:
  std::map<std::string, CycleTerm> terms_;  // key -> normalized term
};

// Substitution on cycle parameters with a stored inverse; construction
// verifies that the two compose to the identity on the mapped symbols.
struct Substitution {
  Subst fwd;
  Subst inv;
  Substitution(Subst fwd, Subst inv);
  static Substitution rename(const std::vector<int>& from, const std::vector<int>& to);
};

// Apply an invertible change of parameters; the image is the same cycle.
CycleTerm reparametrize(const CycleTerm& t, const Substitution& s);
// Apply a substitution on field parameters (a,b,c,...) to every coordinate.
CycleTerm apply_field_subst(const CycleTerm& t, const Subst& s);
CycleSum apply_field_subst(const CycleSum& sum, const Subst& s);

bool eq_mod_alternation(const CycleTerm& s, const CycleTerm& t);

// Text form round trip used by the CLI:  coeff * [e1, ..., en] params (x,y)
std::string format_cycle(const CycleTerm& t);
CycleTerm parse_cycle(const std::string& text);

}  // namespace chow
