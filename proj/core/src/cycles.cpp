#include "chow/cycles.hpp"
#include <unordered_map>

#include <algorithm>
#include <sstream>

namespace chow {

CycleTerm CycleTerm::make(Rat coeff, std::vector<ExtValue> coords, std::vector<int> params) {
  std::vector<RatFunc> cs;
  cs.reserve(coords.size());
  for (auto& c : coords) {
    if (c.infinite) {
      coeff = -coeff;  // [.., inf, ..] = -[.., 0, ..]
      cs.push_back(RatFunc());
    } else {
      cs.push_back(c.v);
    }
  }
  return make(std::move(coeff), std::move(cs), std::move(params));
}

CycleTerm CycleTerm::make(Rat coeff, std::vector<RatFunc> coords, std::vector<int> params) {
  CycleTerm t;
  t.coeff = std::move(coeff);
  t.coeff.canonicalize();
  t.coords = std::move(coords);
  t.params = std::move(params);
  for (int p : t.params)
    if (!sym_is_cycle(p)) throw CycleError("cycle parameter must be one of x,y,z");
  for (size_t i = 0; i < t.params.size(); ++i)
    for (size_t j = i + 1; j < t.params.size(); ++j)
      if (t.params[i] == t.params[j]) throw CycleError("repeated cycle parameter");
  for (auto& f : t.coords)
    for (int s : f.support())
      if (sym_is_cycle(s) && std::find(t.params.begin(), t.params.end(), s) == t.params.end())
        throw CycleError("coordinate uses undeclared cycle parameter in " + f.str());
  return t;
}

std::string CycleTerm::str() const { return format_cycle(*this); }

namespace {

// orientation: choose between f and 1/f; returns sign (+1 keep, -1 flipped)
int orient(RatFunc& f) {
  if (f.is_zero()) return 1;
  if (f.is_constant()) {
    Rat q = f.num().constant() / f.den().constant();
    if (abs(q) < 1) {
      f = f.inverse();
      return -1;
    }
    return 1;
  }
  MPoly nk = f.num().monic();
  int c = MPoly::cmp(nk, f.den());
  if (c > 0) {
    f = f.inverse();
    return -1;
  }
  return 1;
}

struct Candidate {
  std::vector<RatFunc> coords;
  int sign = 1;
  bool zero = false;
  std::string key;
};

Candidate canonicalize_with_names(const CycleTerm& t, const std::vector<int>& names) {
  Candidate cand;
  Subst ren;
  for (size_t i = 0; i < t.params.size(); ++i)
    if (t.params[i] != names[i]) ren[t.params[i]] = RatFunc::sym(names[i]);
  cand.coords.reserve(t.coords.size());
  for (auto& f : t.coords) {
    RatFunc g = ren.empty() ? f : substitute(f, ren);
    if (g.is_one()) {
      cand.zero = true;
      return cand;
    }
    cand.sign *= orient(g);
    cand.coords.push_back(std::move(g));
  }
  // insertion sort with parity tracking
  for (size_t i = 1; i < cand.coords.size(); ++i)
    for (size_t j = i; j > 0 && ratfunc_less(cand.coords[j], cand.coords[j - 1]); --j) {
      std::swap(cand.coords[j], cand.coords[j - 1]);
      cand.sign = -cand.sign;
    }
  for (size_t i = 1; i < cand.coords.size(); ++i)
    if (cand.coords[i] == cand.coords[i - 1]) {
      cand.zero = true;  // repeated coordinate: odd symmetry kills the term
      return cand;
    }
  std::ostringstream os;
  os << t.params.size() << "#";
  for (auto& f : cand.coords) os << f.str() << ";";
  cand.key = os.str();
  return cand;
}

// A coordinate that is a degree-one (Moebius) function of a single cycle
// parameter determines a change of that parameter making the coordinate the
// parameter itself.  Different ways of computing the same geometric cycle
// (e.g. solving a face equation for different variables) differ by exactly
// such changes, so the normal form must quotient them out: we enumerate, for
// every parameter, each Moebius coordinate slot as the potential identity
// slot, and keep the lexicographically least key over all choices.
bool moebius_in(const RatFunc& f, int p) {
  return f.involves(p) && f.num().deg(p) <= 1 && f.den().deg(p) <= 1;
}

// inverse of f = (a p + b)/(c p + d) as a function of the same symbol
RatFunc moebius_inverse(const RatFunc& f, int p) {
  std::vector<MPoly> n = f.num().coeffs_wrt(p);
  std::vector<MPoly> d = f.den().coeffs_wrt(p);
  n.resize(2);
  d.resize(2);
  MPoly sp = MPoly::sym(p);
  // f = (n1 p + n0)/(d1 p + d0)  =>  p = (d0 t - n0)/(n1 - d1 t), t renamed p
  return RatFunc(d[0] * sp - n[0], n[1] - d[1] * sp);
}

std::vector<std::vector<RatFunc>> moebius_variants(const CycleTerm& t) {
  std::vector<std::vector<RatFunc>> variants{t.coords};
  for (int p : t.params) {
    // Candidate presentations for p: those where some Moebius slot becomes p
    // or 1/p.  Including both makes the set intrinsic to the cycle (closed
    // under the coordinate inversions the orientation step applies), which
    // keeps the normal form idempotent.  Coefficients of a Moebius slot may
    // involve the other parameters, so the per-parameter changes compose
    // sequentially rather than as one simultaneous substitution.
    std::vector<std::vector<RatFunc>> next;
    for (const std::vector<RatFunc>& base : variants) {
      std::vector<RatFunc> reps;
      auto push = [&](const RatFunc& r) {
        for (const RatFunc& q : reps)
          if (q == r) return;
        reps.push_back(r);
      };
      Subst pinv;
      pinv[p] = RatFunc(1) / RatFunc::sym(p);
      for (const RatFunc& f : base)
        if (moebius_in(f, p)) {
          RatFunc inv = moebius_inverse(f, p);
          push(inv);
          push(substitute(inv, pinv));
        }
      if (reps.empty()) {
        next.push_back(base);
        continue;
      }
      for (const RatFunc& r : reps) {
        Subst s;
        s[p] = r;
        std::vector<RatFunc> coords;
        coords.reserve(base.size());
        for (const RatFunc& f : base) coords.push_back(substitute(f, s));
        next.push_back(std::move(coords));
      }
    }
    variants = std::move(next);
  }
  return variants;
}

}  // namespace

namespace {

struct NormCache {
  bool dead = false;
  int sign = 1;
  std::vector<RatFunc> coords;
};

const NormCache& normalize_shape(const CycleTerm& t) {
  static thread_local std::unordered_map<std::string, NormCache> cache;
  std::ostringstream ks;
  for (int p : t.params) ks << kSymNames[p];
  ks << "#";
  for (auto& f : t.coords) ks << f.str() << ";";
  auto [it, fresh] = cache.try_emplace(ks.str());
  if (!fresh) return it->second;

  std::vector<int> names;
  for (int i = 0; i < t.d(); ++i) names.push_back(kFirstCycleSym + i);
  std::optional<Candidate> best;
  bool killed = false;
  for (std::vector<RatFunc>& var : moebius_variants(t)) {
    CycleTerm u = t;
    u.coords = std::move(var);
    // try all parameter relabelings; keep the lexicographically least key
    std::vector<int> perm = names;
    std::sort(perm.begin(), perm.end());
    do {
      Candidate c = canonicalize_with_names(u, perm);
      if (c.zero) {
        it->second.dead = true;
        return it->second;
      }
      if (!best || c.key < best->key) {
        best = c;
      } else if (c.key == best->key && c.sign != best->sign) {
        killed = true;  // odd self-symmetry under the reparametrization group
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  if (killed) {
    it->second.dead = true;
  } else {
    it->second.sign = best->sign;
    it->second.coords = best->coords;
  }
  return it->second;
}

}  // namespace

std::optional<CycleTerm> normalize_term(const CycleTerm& t) {
  if (t.coeff == 0) return std::nullopt;
  const NormCache& n = normalize_shape(t);
  if (n.dead) return std::nullopt;
  CycleTerm out;
  out.coeff = t.coeff * n.sign;
  out.coords = n.coords;
  for (int i = 0; i < t.d(); ++i) out.params.push_back(kFirstCycleSym + i);
  return out;
}

std::string term_key(const CycleTerm& t) {
  std::ostringstream os;
  os << t.params.size() << "#";
  for (auto& f : t.coords) os << f.str() << ";";
  return os.str();
}

void CycleSum::add(const CycleTerm& t) {
  auto n = normalize_term(t);
  if (!n) return;
  std::string key = term_key(*n);
  auto it = terms_.find(key);
  if (it == terms_.end()) {
    terms_.emplace(std::move(key), std::move(*n));
  } else {
    it->second.coeff += n->coeff;
    it->second.coeff.canonicalize();
    if (it->second.coeff == 0) terms_.erase(it);
  }
}

void CycleSum::add(const CycleSum& s) {
  for (auto& [k, t] : s.terms_) add(t);
}

void CycleSum::sub(const CycleSum& s) {
  for (auto& [k, t] : s.terms_) {
    CycleTerm neg = t;
    neg.coeff = -neg.coeff;
    add(neg);
  }
}

CycleSum CycleSum::operator+(const CycleSum& o) const {
  CycleSum r(*this);
  r.add(o);
  return r;
}

CycleSum CycleSum::operator-(const CycleSum& o) const {
  CycleSum r(*this);
  r.sub(o);
  return r;
}

CycleSum CycleSum::operator-() const {
  CycleSum r;
  r.sub(*this);
  return r;
}

CycleSum CycleSum::operator*(const Rat& c) const {
  CycleSum r;
  if (c == 0) return r;
  for (auto& [k, t] : terms_) {
    CycleTerm s = t;
    s.coeff *= c;
    s.coeff.canonicalize();
    r.terms_.emplace(k, std::move(s));
  }
  return r;
}

bool CycleSum::operator==(const CycleSum& o) const {
  if (terms_.size() != o.terms_.size()) return false;
  auto it = terms_.begin(), jt = o.terms_.begin();
  for (; it != terms_.end(); ++it, ++jt) {
    if (it->first != jt->first) return false;
    if (::cmp(it->second.coeff, jt->second.coeff) != 0) return false;
  }
  return true;
}

std::string CycleSum::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto& [k, t] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << format_cycle(t);
  }
  return os.str();
}

Substitution::Substitution(Subst f, Subst i) : fwd(std::move(f)), inv(std::move(i)) {
  for (auto& [s, rep] : fwd) {
    RatFunc back = substitute(rep, inv);
    if (back != RatFunc::sym(s)) throw CycleError("substitution inverse check failed for " + std::string(1, kSymNames[s]));
  }
  for (auto& [s, rep] : inv) {
    RatFunc fore = substitute(rep, fwd);
    if (fore != RatFunc::sym(s)) throw CycleError("substitution inverse check failed (reverse) for " + std::string(1, kSymNames[s]));
  }
}

Substitution Substitution::rename(const std::vector<int>& from, const std::vector<int>& to) {
  if (from.size() != to.size()) throw CycleError("rename arity mismatch");
  Subst f, i;
  for (size_t k = 0; k < from.size(); ++k) {
    f[from[k]] = RatFunc::sym(to[k]);
    i[to[k]] = RatFunc::sym(from[k]);
  }
  return Substitution(std::move(f), std::move(i));
}

CycleTerm reparametrize(const CycleTerm& t, const Substitution& s) {
  for (auto& [sym, rep] : s.fwd)
    if (!sym_is_cycle(sym)) throw CycleError("reparametrization must act on cycle parameters");
  std::vector<RatFunc> coords;
  coords.reserve(t.coords.size());
  for (auto& f : t.coords) coords.push_back(substitute(f, s.fwd));
  // parameters: renamed where the substitution is a pure renaming, else kept
  std::vector<int> params = t.params;
  for (auto& p : params) {
    auto it = s.fwd.find(p);
    if (it == s.fwd.end()) continue;
    const RatFunc& rep = it->second;
    if (rep.den() == MPoly(Rat(1)) && !rep.num().is_constant() && rep.num().total_deg() == 1 &&
        rep.num().terms().size() == 1 && rep.num().lead_coeff() == 1) {
      // x -> y style renaming: track the new parameter name
      for (int sidx : rep.support()) p = sidx;
    }
  }
  return CycleTerm::make(t.coeff, std::move(coords), std::move(params));
}

CycleTerm apply_field_subst(const CycleTerm& t, const Subst& s) {
  for (auto& [sym, rep] : s) {
    if (sym_is_cycle(sym)) throw CycleError("field substitution must not touch cycle parameters");
    for (int rs : rep.support())
      if (sym_is_cycle(rs)) throw CycleError("field substitution image uses cycle parameter");
  }
  std::vector<RatFunc> coords;
  coords.reserve(t.coords.size());
  for (auto& f : t.coords) coords.push_back(substitute(f, s));
  return CycleTerm::make(t.coeff, std::move(coords), t.params);
}

CycleSum apply_field_subst(const CycleSum& sum, const Subst& s) {
  CycleSum out;
  for (auto& [k, t] : sum.terms()) out.add(apply_field_subst(t, s));
  return out;
}

bool eq_mod_alternation(const CycleTerm& s, const CycleTerm& t) {
  auto ns = normalize_term(s), nt = normalize_term(t);
  if (!ns || !nt) return !ns && !nt;
  return term_key(*ns) == term_key(*nt) && ::cmp(ns->coeff, nt->coeff) == 0;
}

std::string format_cycle(const CycleTerm& t) {
  std::ostringstream os;
  if (!(t.coeff == 1)) os << rat_str(t.coeff) << " * ";
  os << "[";
  for (size_t i = 0; i < t.coords.size(); ++i) {
    if (i) os << ", ";
    os << t.coords[i].str();
  }
  os << "] params (";
  for (size_t i = 0; i < t.params.size(); ++i) {
    if (i) os << ",";
    os << kSymNames[t.params[i]];
  }
  os << ")";
  return os.str();
}

namespace {

std::vector<std::string> split_top_level(const std::string& s, char sep) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char c : s) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == sep && depth == 0) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

CycleTerm parse_cycle(const std::string& text) {
  size_t lb = text.find('[');
  size_t rb = text.rfind(']');
  if (lb == std::string::npos || rb == std::string::npos || rb < lb)
    throw ParseError("cycle term must contain [...]: " + text);
  Rat coeff(1);
  std::string head = text.substr(0, lb);
  size_t star = head.rfind('*');
  if (star != std::string::npos) {
    RatFunc c = parse_ratfunc(head.substr(0, star));
    if (!c.is_constant()) throw ParseError("cycle coefficient must be rational: " + head);
    coeff = c.num().constant() / c.den().constant();
  } else {
    bool blank = true;
    for (char ch : head)
      if (!isspace(static_cast<unsigned char>(ch))) blank = false;
    if (!blank) throw ParseError("unexpected text before '[': " + text);
  }
  std::vector<RatFunc> coords;
  for (auto& piece : split_top_level(text.substr(lb + 1, rb - lb - 1), ','))
    coords.push_back(parse_ratfunc(piece));
  std::string tail = text.substr(rb + 1);
  size_t pk = tail.find("params");
  if (pk == std::string::npos) throw ParseError("cycle term must declare params (...): " + text);
  size_t lp = tail.find('(', pk);
  size_t rp = tail.find(')', pk);
  if (lp == std::string::npos || rp == std::string::npos) throw ParseError("malformed params list: " + text);
  std::vector<int> params;
  for (char c : tail.substr(lp + 1, rp - lp - 1)) {
    if (isspace(static_cast<unsigned char>(c)) || c == ',') continue;
    params.push_back(sym_index(c));
  }
  return CycleTerm::make(coeff, std::move(coords), std::move(params));
}

}  // namespace chow
