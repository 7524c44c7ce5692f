#include "chow/rewrite.hpp"

#include <sstream>

namespace chow {

bool g_check_admissibility = true;

namespace {

CycleSum single(const CycleTerm& t) {
  CycleSum s;
  s.add(t);
  return s;
}

CycleTerm with_coord(const CycleTerm& t, int pos, const RatFunc& f) {
  std::vector<RatFunc> coords = t.coords;
  coords[pos] = f;
  return CycleTerm::make(t.coeff, coords, t.params);
}

RatFunc swap_param(const RatFunc& f, int from, int to) {
  if (!f.involves(from)) return f;
  Subst s;
  s[from] = RatFunc(MPoly::sym(to));
  return substitute(f, s);
}

bool admissible_cached(const CycleTerm& t) {
  static std::map<std::string, bool> cache;
  std::string key = t.str();
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  bool ok = is_admissible(t).admissible;
  cache.emplace(std::move(key), ok);
  return ok;
}

void require_admissible(const CycleTerm& t, const char* what) {
  if (!g_check_admissibility) return;
  if (!admissible_cached(t))
    throw InadmissibleResult(std::string(what) + ": " + t.str());
}

void require_shape(const CycleTerm& t) {
  if (t.n() != 5 || t.d() != 2)
    throw HypothesisFailed("operation requires a 5-coordinate 2-parameter term");
}

// Non-constant branches y = r(x) of f4 = 0 and f4 = infinity.
std::vector<RatFunc> branches_f4(const RatFunc& f4, int xs, int ys) {
  std::vector<RatFunc> out;
  for (const MPoly* p : {&f4.num(), &f4.den()}) {
    if (!p->involves(ys)) continue;
    for (const Branch& b : solve_branches(*p, ys).branches)
      if (b.expr.involves(xs)) out.push_back(b.expr);
  }
  return out;
}

// Lemma hypothesis: f along every non-constant branch equals f itself (as a
// function of x).
void check_branch_invariance(const RatFunc& f_of_y, const RatFunc& f4, int xs, int ys,
                             Cert& checks) {
  RatFunc f_of_x = swap_param(f_of_y, ys, xs);
  for (const RatFunc& r : branches_f4(f4, xs, ys)) {
    Subst s;
    s[ys] = r;
    if (!(substitute(f_of_y, s) == f_of_x))
      throw HypothesisFailed("coordinate not invariant along branch y = " + r.str());
    checks.push_back("branch y = " + r.str() + ": diagonal coordinate invariant");
  }
}

int fresh_param(const std::vector<int>& used) {
  for (int i = 0; i < 3; ++i) {
    int s = kFirstCycleSym + i;
    if (std::find(used.begin(), used.end(), s) == used.end()) return s;
  }
  throw RewriteError("no free cycle parameter for a witness");
}

RatFunc witness_coord(const RatFunc& g, const RatFunc& h, int z) {
  RatFunc zf{MPoly::sym(z)};
  return (zf - g * h) / (zf - g);
}

}  // namespace

VerifiedIdentity identity_of(const CycleSum& s) {
  VerifiedIdentity id;
  id.lhs = s;
  id.rhs = s;
  return id;
}

VerifiedIdentity reverse(VerifiedIdentity id) {
  std::swap(id.lhs, id.rhs);
  Cert step;
  step["op"] = "reverse";
  id.certificate.push_back(step);
  return id;
}

VerifiedIdentity compose(VerifiedIdentity a, const VerifiedIdentity& b) {
  if (!(a.rhs == b.lhs)) throw RewriteError("compose: middle sums disagree");
  a.rhs = b.rhs;
  for (const auto& s : b.certificate) a.certificate.push_back(s);
  return a;
}

VerifiedIdentity add(VerifiedIdentity a, const VerifiedIdentity& b) {
  a.lhs = a.lhs + b.lhs;
  a.rhs = a.rhs + b.rhs;
  for (const auto& s : b.certificate) a.certificate.push_back(s);
  return a;
}

VerifiedIdentity scale(VerifiedIdentity a, const Rat& c) {
  a.lhs = a.lhs * c;
  a.rhs = a.rhs * c;
  Cert step;
  step["op"] = "scale";
  step["factor"] = rat_str(c);
  a.certificate.push_back(step);
  return a;
}

VerifiedIdentity within(const CycleSum& s, const VerifiedIdentity& id) {
  VerifiedIdentity out;
  out.lhs = s;
  out.rhs = s - id.lhs + id.rhs;
  out.certificate = id.certificate;
  return out;
}

VerifiedIdentity discard_negligible(const CycleTerm& t) {
  NegligibilityReport rep = is_negligible(t);
  if (!rep.negligible) throw HypothesisFailed("term is not negligible: " + t.str());
  VerifiedIdentity id;
  id.lhs = single(t);
  Cert step;
  step["op"] = "discard_negligible";
  step["term"] = t.str();
  step["pattern"] = rep.pattern;
  if (rep.coordinate >= 0) step["coordinate"] = rep.coordinate + 1;
  id.certificate.push_back(step);
  return id;
}

VerifiedIdentity discard_all_negligible(const CycleSum& s) {
  VerifiedIdentity id = identity_of(s);
  for (const auto& [k, t] : s.terms()) {
    NegligibilityReport rep = is_negligible(t);
    if (!rep.negligible) continue;
    id = compose(std::move(id), within(id.rhs, discard_negligible(t)));
  }
  return id;
}

VerifiedIdentity reparam(const CycleTerm& t, const Substitution& s) {
  VerifiedIdentity id;
  id.lhs = single(t);
  id.rhs = single(reparametrize(t, s));
  Cert step;
  step["op"] = "reparam";
  Cert map = Cert::object();
  for (const auto& [sym, rep] : s.fwd) map[std::string(1, kSymNames[sym])] = rep.str();
  step["substitution"] = map;
  id.certificate.push_back(step);
  return id;
}

VerifiedIdentity reparam_cover(const CycleTerm& t, const Subst& phi) {
  long deg = 1;
  Cert map = Cert::object();
  for (const auto& [sym, rep] : phi) {
    if (!sym_is_cycle(sym)) throw HypothesisFailed("cover must act on cycle parameters");
    for (int s : rep.support())
      if (sym_is_cycle(s) && s != sym)
        throw HypothesisFailed("cover must be coordinatewise (one parameter at a time)");
    int d = std::max(rep.num().deg(sym), rep.den().deg(sym));
    if (d < 1) throw HypothesisFailed("cover component is constant");
    deg *= d;
    map[std::string(1, kSymNames[sym])] = rep.str();
  }
  std::vector<RatFunc> coords;
  for (const RatFunc& f : t.coords) coords.push_back(substitute(f, phi));
  CycleTerm tc = CycleTerm::make(t.coeff, coords, t.params);
  VerifiedIdentity id;
  id.lhs = single(tc);
  id.rhs = single(t) * Rat(deg);
  Cert step;
  step["op"] = "reparam_cover";
  step["substitution"] = map;
  step["degree"] = deg;
  id.certificate.push_back(step);
  return id;
}

VerifiedIdentity certify_by_witness(const CycleSum& lhs, const CycleSum& rhs,
                                    const std::vector<CycleTerm>& witness, Cert step) {
  // The boundary is taken term by term on the witness presentations as
  // constructed, so that each face stays parametrized compatibly with the
  // claimed terms; the summed faces are then normalized when folded.
  CycleSum b;
  for (const CycleTerm& t : witness) {
    if (g_check_admissibility && !admissible_cached(t))
      throw InadmissibleResult("witness cycle is not admissible: " + t.str());
    b = b + boundary(t);
  }
  CycleSum d = lhs - rhs;
  for (int sign : {1, -1}) {
    CycleSum residual = b * Rat(sign) - d;
    bool all_neg = true;
    Cert discards = Cert::array();
    for (const auto& [k, t] : residual.terms()) {
      NegligibilityReport rep = is_negligible(t);
      if (!rep.negligible) {
        all_neg = false;
        break;
      }
      Cert dd;
      dd["term"] = t.str();
      dd["pattern"] = rep.pattern;
      discards.push_back(dd);
    }
    if (all_neg) {
      step["witness_boundary_matches"] = true;
      step["residual_discards"] = discards;
      VerifiedIdentity id;
      id.lhs = lhs;
      id.rhs = rhs;
      id.certificate.push_back(step);
      return id;
    }
  }
  throw WitnessBoundaryMismatch("witness boundary does not certify the claim: residual " +
                                (b - d).str());
}

VerifiedIdentity split_f4(const CycleTerm& t, const RatFunc& g, const RatFunc& h) {
  require_shape(t);
  if (!(t.coords[3] == g * h))
    throw FactorMismatch("fourth coordinate is not the given product");
  CycleTerm tg = with_coord(t, 3, g);
  CycleTerm th = with_coord(t, 3, h);
  require_admissible(t, "split_f4 input");
  require_admissible(tg, "split_f4 result");
  require_admissible(th, "split_f4 result");
  int z = fresh_param(t.params);
  std::vector<RatFunc> wc{t.coords[0], t.coords[1], t.coords[2],
                          witness_coord(g, h, z), RatFunc(MPoly::sym(z)), t.coords[4]};
  std::vector<int> wp = t.params;
  wp.push_back(z);
  std::vector<CycleTerm> witness{CycleTerm::make(t.coeff, wc, wp)};
  Cert step;
  step["op"] = "split_f4";
  step["term"] = t.str();
  step["g"] = g.str();
  step["h"] = h.str();
  return certify_by_witness(single(t), single(tg) + single(th), witness, std::move(step));
}

namespace {

// Shared hypothesis of the single-coordinate and first-pair splits: the first
// two coordinates carry the same one-variable function, invariant along every
// non-constant branch of the fourth coordinate.
void check_matching_diagonal(const CycleTerm& t, Cert& checks) {
  int xs = t.params[0];
  int ys = t.params[1];
  if (!(swap_param(t.coords[1], ys, xs) == t.coords[0]))
    throw HypothesisFailed("first two coordinates carry different functions");
  checks.push_back("f1 = f2");
  check_branch_invariance(t.coords[1], t.coords[3], xs, ys, checks);
}

}  // namespace

VerifiedIdentity split_single(const CycleTerm& t, int pos, const RatFunc& g,
                              const RatFunc& h) {
  require_shape(t);
  if (pos != 2 && pos != 4) throw HypothesisFailed("split_single: position must be 3rd or 5th");
  if (!(t.coords[pos] == g * h))
    throw FactorMismatch("coordinate is not the given product");
  Cert checks = Cert::array();
  check_matching_diagonal(t, checks);
  CycleTerm tg = with_coord(t, pos, g);
  CycleTerm th = with_coord(t, pos, h);
  require_admissible(t, "split_single input");
  require_admissible(tg, "split_single result");
  require_admissible(th, "split_single result");
  Cert step;
  step["op"] = "split_single";
  step["term"] = t.str();
  step["position"] = pos + 1;
  step["g"] = g.str();
  step["h"] = h.str();
  step["checks"] = checks;
  VerifiedIdentity id;
  id.lhs = single(t);
  id.rhs = single(tg) + single(th);
  id.certificate.push_back(step);
  return id;
}

VerifiedIdentity split_first_pair(const CycleTerm& t, const RatFunc& g,
                                  const RatFunc& h, PairForm form) {
  require_shape(t);
  int xs = t.params[0];
  int ys = t.params[1];
  if (!(t.coords[0] == g * h))
    throw FactorMismatch("first coordinate is not the given product");
  Cert checks = Cert::array();
  check_matching_diagonal(t, checks);
  // Branch stability of g: along every non-constant branch, g(r(x)) is g(x)
  // or h(x).
  for (const RatFunc& r : branches_f4(t.coords[3], xs, ys)) {
    Subst s;
    s[xs] = r;
    RatFunc gr = substitute(g, s);
    if (!(gr == g) && !(gr == h))
      throw HypothesisFailed("g not branch-stable along y = " + r.str());
    checks.push_back("branch y = " + r.str() + ": g(r) is " + (gr == g ? "g" : "h"));
  }
  auto Z = [&](const RatFunc& u, const RatFunc& v) {
    CycleTerm out = with_coord(t, 0, u);
    return with_coord(out, 1, swap_param(v, xs, ys));
  };
  RatFunc gh = g * h;
  std::vector<CycleTerm> results;
  VerifiedIdentity id;
  if (form == PairForm::eq31) {
    id.lhs = single(t) * Rat(2);
    results = {Z(g, gh), Z(h, gh), Z(gh, g), Z(gh, h)};
  } else {
    id.lhs = single(t);
    results = {Z(g, g), Z(h, h), Z(h, g), Z(g, h)};
  }
  require_admissible(t, "split_first_pair input");
  for (const CycleTerm& r : results) {
    require_admissible(r, "split_first_pair result");
    id.rhs.add(r);
  }
  Cert step;
  step["op"] = "split_first_pair";
  step["term"] = t.str();
  step["g"] = g.str();
  step["h"] = h.str();
  step["form"] = form == PairForm::eq31 ? "2Z=Z(g,.)+Z(h,.)+Z(.,g)+Z(.,h)"
                                        : "Z=Z(g,g)+Z(h,h)+Z(h,g)+Z(g,h)";
  step["checks"] = checks;
  id.certificate.push_back(step);
  return id;
}

VerifiedIdentity pair_split(const CycleTerm& t1, const CycleTerm& t2, int pos,
                            const RatFunc& g, const RatFunc& h) {
  require_shape(t1);
  require_shape(t2);
  if (t1.params != t2.params) throw HypothesisFailed("pair terms use different parameters");
  if (t1.coeff != t2.coeff) throw HypothesisFailed("pair terms carry different coefficients");
  int xs = t1.params[0];
  int ys = t1.params[1];
  // [f1,f2,f3,p4,f5] and [f2,f1,f3,q4,f5]
  if (!(swap_param(t1.coords[1], ys, xs) == t2.coords[0]) ||
      !(swap_param(t1.coords[0], xs, ys) == t2.coords[1]) ||
      !(t1.coords[2] == t2.coords[2]) || !(t1.coords[4] == t2.coords[4]))
    throw HypothesisFailed("terms do not form a matched pair");
  // Both fourth coordinates vanish/blow up only along y = x.
  RatFunc diag{MPoly::sym(xs)};
  for (const RatFunc& f4 : {t1.coords[3], t2.coords[3]})
    for (const RatFunc& r : branches_f4(f4, xs, ys))
      if (!(r == diag))
        throw HypothesisFailed("fourth coordinate has a non-diagonal branch y = " + r.str());
  if (pos != 1 && pos != 2 && pos != 4)
    throw HypothesisFailed("pair_split: position must be 2nd, 3rd or 5th");
  // The split coordinate (a function of y for positions 2nd/5th slots of t1,
  // of x for the 3rd) must equal g*h.
  RatFunc target = t1.coords[pos];
  if (!(target == g * h)) throw FactorMismatch("coordinate is not the given product");

  require_admissible(t1, "pair_split input");
  require_admissible(t2, "pair_split input");
  std::vector<CycleTerm> results;
  auto push = [&](const CycleTerm& t) {
    require_admissible(t, "pair_split result");
    results.push_back(t);
  };
  int z = fresh_param(t1.params);
  RatFunc zf{MPoly::sym(z)};
  std::vector<int> wp = t1.params;
  wp.push_back(z);
  std::vector<CycleTerm> witness;
  if (pos == 1) {
    // second coordinate: f2 = gh as a function of y in t1, of x in t2
    RatFunc ghx = swap_param(target, ys, xs);
    if (!(t2.coords[0] == ghx)) throw HypothesisFailed("pair coordinates disagree");
    RatFunc gx = swap_param(g, ys, xs);
    RatFunc hx = swap_param(h, ys, xs);
    push(with_coord(t1, 1, g));
    push(with_coord(t2, 0, gx));
    push(with_coord(t1, 1, h));
    push(with_coord(t2, 0, hx));
    witness.push_back(CycleTerm::make(
        t1.coeff,
        std::vector<RatFunc>{t1.coords[0], witness_coord(g, h, z), zf, t1.coords[2],
                             t1.coords[3], t1.coords[4]},
        wp));
    witness.push_back(CycleTerm::make(
        -t1.coeff,
        std::vector<RatFunc>{witness_coord(gx, hx, z), zf, t2.coords[1],
                             t1.coords[2], t2.coords[3], t2.coords[4]},
        wp));
  } else {
    push(with_coord(t1, pos, g));
    push(with_coord(t2, pos, g));
    push(with_coord(t1, pos, h));
    push(with_coord(t2, pos, h));
    for (const CycleTerm* t : {&t1, &t2}) {
      std::vector<RatFunc> wc;
      for (int j = 0; j < 5; ++j) {
        if (j == pos) {
          wc.push_back(witness_coord(g, h, z));
          wc.push_back(zf);
        } else {
          wc.push_back(t->coords[j]);
        }
      }
      witness.push_back(CycleTerm::make(t->coeff, wc, wp));
    }
  }
  Cert step;
  step["op"] = "pair_split";
  step["terms"] = Cert::array({t1.str(), t2.str()});
  step["position"] = pos + 1;
  step["g"] = g.str();
  step["h"] = h.str();
  CycleSum rhs;
  for (const CycleTerm& r : results) rhs.add(r);
  return certify_by_witness(single(t1) + single(t2), rhs, witness, std::move(step));
}

VerifiedIdentity move_constant(const CycleTerm& t1, const CycleTerm& t2, int pos,
                               const RatFunc& alpha) {
  if (!alpha.is_cycle_constant() || alpha.is_zero())
    throw HypothesisFailed("factor must be a nonzero constant");
  if (alpha.is_one()) return identity_of(single(t1) + single(t2));
  RatFunc f = t1.coords[pos] / alpha;
  VerifiedIdentity id = pair_split(t1, t2, pos, alpha, f);
  id = compose(std::move(id), discard_all_negligible(id.rhs));
  return id;
}

VerifiedIdentity convert_f4(const CycleTerm& t, const RatFunc& new_f4,
                            const RatFunc& cof_x, const RatFunc& cof_y) {
  int xs = t.params[0];
  int ys = t.params[1];
  if (cof_x.involves(ys) || cof_y.involves(xs))
    throw HypothesisFailed("cofactors must separate the two parameters");
  RatFunc cof = cof_x * cof_y;
  if (!(t.coords[3] == new_f4 * cof))
    throw FactorMismatch("fourth coordinate does not factor as requested");
  if (cof.is_one()) return identity_of(single(t));
  VerifiedIdentity id = split_f4(t, new_f4, cof);
  CycleTerm tcof = with_coord(t, 3, cof);
  if (cof_x.involves(xs) && cof_y.involves(ys)) {
    id = compose(std::move(id), within(id.rhs, split_f4(tcof, cof_x, cof_y)));
  }
  id = compose(std::move(id), discard_all_negligible(id.rhs));
  CycleSum want = single(with_coord(t, 3, new_f4));
  if (!(id.rhs == want))
    throw RewriteError("convert_f4: residual terms were not negligible");
  return id;
}

VerifiedIdentity strip_const_12(const CycleTerm& t, const RatFunc& alpha) {
  if (!alpha.is_cycle_constant() || alpha.is_zero())
    throw HypothesisFailed("factor must be a nonzero constant");
  if (alpha.is_one()) return identity_of(single(t));
  int xs = t.params[0];
  RatFunc f = t.coords[0] / alpha;
  if (!f.involves(xs)) throw HypothesisFailed("stripped coordinate must stay non-constant");
  VerifiedIdentity id = split_first_pair(t, alpha, f, PairForm::eq32);
  id = compose(std::move(id), discard_all_negligible(id.rhs));
  return id;
}

VerifiedIdentity strip_const_single(const CycleTerm& t, int pos, const RatFunc& alpha) {
  if (!alpha.is_cycle_constant() || alpha.is_zero())
    throw HypothesisFailed("factor must be a nonzero constant");
  if (alpha.is_one()) return identity_of(single(t));
  RatFunc f = t.coords[pos] / alpha;
  VerifiedIdentity id = split_single(t, pos, alpha, f);
  id = compose(std::move(id), discard_all_negligible(id.rhs));
  return id;
}

}  // namespace chow
