// Certificate-producing rewriting of cycle sums.  Every operation returns a
// VerifiedIdentity: an equality lhs = rhs in the working complex (modulo
// boundaries and negligible cycles) together with a machine-checked
// justification — hypothesis checks, an explicit boundary witness whose
// boundary is recomputed, or a logged negligible discard.
#pragma once

#include <nlohmann/json.hpp>

#include "chow/boundary.hpp"

namespace chow {

using Cert = nlohmann::ordered_json;

struct RewriteError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct FactorMismatch : RewriteError {
  using RewriteError::RewriteError;
};
struct HypothesisFailed : RewriteError {
  using RewriteError::RewriteError;
};
struct WitnessBoundaryMismatch : RewriteError {
  using RewriteError::RewriteError;
};
struct InadmissibleResult : RewriteError {
  using RewriteError::RewriteError;
};

struct VerifiedIdentity {
  CycleSum lhs;
  CycleSum rhs;
  Cert certificate = Cert::array();
};

// Toggle for the per-operation admissibility preconditions (on by default;
// tests may disable it to time the pure rewriting path).
extern bool g_check_admissibility;

// --- combinators -----------------------------------------------------------
VerifiedIdentity identity_of(const CycleSum& s);
VerifiedIdentity reverse(VerifiedIdentity id);
// a.rhs must equal b.lhs.
VerifiedIdentity compose(VerifiedIdentity a, const VerifiedIdentity& b);
VerifiedIdentity add(VerifiedIdentity a, const VerifiedIdentity& b);
VerifiedIdentity scale(VerifiedIdentity a, const Rat& c);
// Rewrite inside a larger sum: replaces an occurrence of id.lhs in s.
VerifiedIdentity within(const CycleSum& s, const VerifiedIdentity& id);

// --- primitive operations --------------------------------------------------

// t = 0 in the working complex; requires is_negligible(t).
VerifiedIdentity discard_negligible(const CycleTerm& t);
// Discard every negligible term of s at once.
VerifiedIdentity discard_all_negligible(const CycleSum& s);

// Invertible change of cycle parameters: t = reparametrize(t, s).
VerifiedIdentity reparam(const CycleTerm& t, const Substitution& s);

// Precomposition with a coordinatewise covering map phi (each parameter maps
// to a rational function of itself alone).  The pushforward identity
// [coords ∘ phi] = deg(phi) · [coords] with deg = product of per-parameter
// degrees.
VerifiedIdentity reparam_cover(const CycleTerm& t, const Subst& phi);

// Multiplicative split of the fourth coordinate (two-variable position),
// verified by an explicit 6-cube witness whose boundary is recomputed:
// [f1,f2,f3,gh,f5] = [f1,f2,f3,g,f5] + [f1,f2,f3,h,f5].
VerifiedIdentity split_f4(const CycleTerm& t, const RatFunc& g, const RatFunc& h);

// Multiplicative split of a single-variable coordinate (position 2 or 4,
// 0-based) under the matching-diagonal hypothesis: coords 1 and 2 carry the
// same function, and that function is invariant along every non-constant
// branch y = r(x) of f4 = 0, infinity.
VerifiedIdentity split_single(const CycleTerm& t, int pos, const RatFunc& g,
                              const RatFunc& h);

enum class PairForm { eq31, eq32 };
// Simultaneous split of the first two coordinates when f1 = f2 = g·h and g is
// branch-stable (g(r(x)) equals g(x) or h(x) on every non-constant branch):
//   eq31: 2 Z(gh,gh) = Z(g,gh)+Z(h,gh)+Z(gh,g)+Z(gh,h)
//   eq32:   Z(gh,gh) = Z(g,g)+Z(h,h)+Z(h,g)+Z(g,h)
VerifiedIdentity split_first_pair(const CycleTerm& t, const RatFunc& g,
                                  const RatFunc& h, PairForm form);

// Paired split for two terms [f1,f2,f3,p4,f5] and [f2,f1,f3,q4,f5] whose
// fourth coordinates vanish/blow up only along y = x.  pos selects the
// coordinate being split (1, 2 or 4, 0-based).  Verified by the explicit
// 6-cube witness pair; the diagonal restrictions cancel by skew-symmetry
// inside the recomputed boundary.
VerifiedIdentity pair_split(const CycleTerm& t1, const CycleTerm& t2, int pos,
                            const RatFunc& g, const RatFunc& h);

// Drop a cycle-constant factor alpha from coordinate pos of a matched pair;
// composition of pair_split with two constant-coordinate discards.
VerifiedIdentity move_constant(const CycleTerm& t1, const CycleTerm& t2, int pos,
                               const RatFunc& alpha);

// Replace the fourth coordinate by new_f4 when the ratio splits into an
// x-only and a y-only cofactor (each discarded as a disjoint product):
// old_f4 = new_f4 · cof_x · cof_y.
VerifiedIdentity convert_f4(const CycleTerm& t, const RatFunc& new_f4,
                            const RatFunc& cof_x, const RatFunc& cof_y);

// Strip a cycle-constant factor alpha from both of the first two coordinates
// (eq32 with a constant factor; the three constant-coordinate by-products are
// discarded): Z(alpha·f, alpha·f) = Z(f, f).
VerifiedIdentity strip_const_12(const CycleTerm& t, const RatFunc& alpha);

// Strip a cycle-constant factor from coordinate pos in {2,4} via the
// single-coordinate split.
VerifiedIdentity strip_const_single(const CycleTerm& t, int pos, const RatFunc& alpha);

// Shared check: claim lhs − rhs equals ±boundary(witness) up to negligible
// terms; throws WitnessBoundaryMismatch otherwise.  Returns the certified
// identity with the residual discard log.
VerifiedIdentity certify_by_witness(const CycleSum& lhs, const CycleSum& rhs,
                                    const std::vector<CycleTerm>& witness, Cert step);

}  // namespace chow
