#include "chow/boundary.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace chow {

namespace {

// Substitute sym = v into a polynomial constraint; returns the numerator of
// the resulting rational function (denominators are nonvanishing on the
// generic part of the branch).
MPoly subst_constraint(const MPoly& p, int sym, const RatFunc& v) {
  Subst s;
  s[sym] = v;
  return subst_poly(p, s).num();
}

void decompose_rec(std::vector<MPoly> constraints, std::vector<int> params,
                   Subst chain, int mult, std::vector<LocusLeaf>& out) {
  // Drop identically-zero constraints.
  std::vector<MPoly> live;
  for (auto& c : constraints)
    if (!c.is_zero()) live.push_back(c);
  if (live.empty()) {
    out.push_back(LocusLeaf{std::move(chain), std::move(params), mult});
    return;
  }
  // A nonzero constraint free of every remaining cycle parameter cuts out the
  // empty set: field parameters are generic.
  for (auto& c : live) {
    bool touches = false;
    for (int p : params)
      if (c.involves(p)) { touches = true; break; }
    if (!touches) return;
  }
  // Solve the first constraint for a parameter of minimal positive degree
  // (linear whenever possible; the branch solver handles degree two only).
  MPoly c0 = live.front();
  int sym = -1;
  int best = -1;
  for (int p : params) {
    int d = c0.deg(p);
    if (d <= 0) continue;
    if (best < 0 || d < best || (d == best && p > sym)) {
      best = d;
      sym = p;
    }
  }
  BranchDecomp bd = solve_branches(c0, sym);
  // Component where the content (free of sym) vanishes.
  if (!bd.content.is_constant()) {
    std::vector<MPoly> rest(live.begin() + 1, live.end());
    rest.push_back(bd.content);
    decompose_rec(std::move(rest), params, chain, mult, out);
  }
  for (const Branch& b : bd.branches) {
    Subst new_chain = chain;
    bool at_infinity = false;
    for (auto& [s, rep] : new_chain) {
      Subst one;
      one[sym] = b.expr;
      try {
        rep = substitute(rep, one);
      } catch (const AlgebraError&) {
        // a previously solved variable escapes to infinity on this branch;
        // the chart does not see this locus
        at_infinity = true;
        break;
      }
    }
    if (at_infinity) continue;
    new_chain[sym] = b.expr;
    std::vector<int> rest_params;
    for (int p : params)
      if (p != sym) rest_params.push_back(p);
    std::vector<MPoly> rest;
    for (size_t i = 1; i < live.size(); ++i)
      rest.push_back(subst_constraint(live[i], sym, b.expr));
    decompose_rec(std::move(rest), std::move(rest_params), std::move(new_chain),
                  mult * b.mult, out);
  }
}

}  // namespace

std::vector<LocusLeaf> decompose_locus(std::vector<MPoly> constraints,
                                       std::vector<int> params) {
  std::vector<LocusLeaf> out;
  decompose_rec(std::move(constraints), std::move(params), Subst{}, 1, out);
  return out;
}

namespace {

MPoly face_equation(const RatFunc& f, int eps) {
  return eps == 0 ? f.num() : f.den();
}

}  // namespace

CycleSum face_restrict(const CycleTerm& t, const Face& f) {
  CycleSum out;
  std::vector<MPoly> constraints{face_equation(t.coords[f.index], f.eps)};
  for (const LocusLeaf& leaf : decompose_locus(constraints, t.params)) {
    std::vector<ExtValue> coords;
    bool dead = false, indeterminate = false;
    for (int j = 0; j < t.n(); ++j) {
      if (j == f.index) continue;
      try {
        ExtValue v = subst_ext(t.coords[j], leaf.chain);
        if (!v.infinite && v.v.is_one()) { dead = true; break; }
        coords.push_back(std::move(v));
      } catch (const AlgebraError&) {
        // 0/0 on the whole component: the parametrization is indeterminate
        // there, and the component belongs to a blow-up locus handled (or
        // excluded) elsewhere.
        indeterminate = true;
        break;
      }
    }
    if (dead || indeterminate) continue;
    out.add(CycleTerm::make(t.coeff * leaf.mult, coords, leaf.free_params));
  }
  // Components of the face divisor contained in a parameter hyperplane
  // {p = infinity}.  Such a hyperplane is irreducible of the divisor
  // dimension, so it is itself the component; its multiplicity is the degree
  // drop of the face coordinate in p.
  for (int p : t.params) {
    int dn = t.coords[f.index].num().deg(p);
    int dd = t.coords[f.index].den().deg(p);
    int m = (f.eps == 0) ? dd - dn : dn - dd;
    if (m <= 0) continue;
    Subst inv;
    inv[p] = RatFunc(1) / RatFunc::sym(p);
    Subst pin;
    pin[p] = RatFunc(0);
    std::vector<ExtValue> coords;
    std::vector<int> rest;
    for (int q : t.params)
      if (q != p) rest.push_back(q);
    bool dead = false, indeterminate = false;
    for (int j = 0; j < t.n(); ++j) {
      if (j == f.index) continue;
      try {
        ExtValue v = subst_ext(substitute(t.coords[j], inv), pin);
        if (!v.infinite && v.v.is_one()) { dead = true; break; }
        coords.push_back(std::move(v));
      } catch (const AlgebraError&) {
        indeterminate = true;
        break;
      }
    }
    if (dead || indeterminate) continue;
    out.add(CycleTerm::make(t.coeff * m, coords, rest));
  }
  return out;
}

CycleSum boundary(const CycleTerm& t) {
  CycleSum out;
  for (int i = 0; i < t.n(); ++i) {
    Rat sign = (i % 2 == 0) ? 1 : -1;
    out.add(face_restrict(t, Face{i, 0}) * sign);
    out.add(face_restrict(t, Face{i, 1}) * (-sign));
  }
  return out;
}

CycleSum boundary(const CycleSum& s) {
  CycleSum out;
  for (const auto& [k, t] : s.terms()) out.add(boundary(t));
  return out;
}

namespace {

void check_face_tuple(const CycleTerm& t, const std::vector<Face>& faces,
                      AdmissibilityReport& rep) {
  std::vector<MPoly> constraints;
  for (const Face& f : faces) constraints.push_back(face_equation(t.coords[f.index], f.eps));
  FaceCheck fc;
  fc.faces = faces;
  int k = static_cast<int>(faces.size());
  for (const LocusLeaf& leaf : decompose_locus(constraints, t.params)) {
    // A leaf only certifies the face conditions where the coordinates are
    // defined: a face coordinate that degenerates to 0/0 on the leaf marks an
    // indeterminacy locus of the parametrization, which is the boundary of a
    // larger component checked (or excluded) on its own.
    bool indeterminate = false;
    for (const Face& f : faces) {
      try {
        subst_ext(t.coords[f.index], leaf.chain);
      } catch (const AlgebraError&) {
        indeterminate = true;
        break;
      }
    }
    if (indeterminate) continue;
    ComponentCheck cc;
    cc.dim = static_cast<int>(leaf.free_params.size());
    cc.bound = t.d() - k;
    cc.excluded = false;
    for (int j = 0; j < t.n(); ++j) {
      bool on_face = false;
      for (const Face& f : faces) on_face |= (f.index == j);
      if (on_face) continue;
      try {
        ExtValue v = subst_ext(t.coords[j], leaf.chain);
        if (!v.infinite && v.v.is_one()) {
          cc.excluded = true;
          cc.ones.push_back(j);
        }
      } catch (const AlgebraError&) {
        // infinite or indeterminate on this component; not identically 1
      }
    }
    cc.ok = cc.excluded || cc.dim <= cc.bound;
    if (!cc.ok) fc.ok = false;
    fc.comps.push_back(std::move(cc));
  }
  if (k == 1) rep.codim1.push_back(fc);
  if (!fc.ok) {
    rep.admissible = false;
    rep.violations.push_back(std::move(fc));
  }
}

void enumerate_tuples(const CycleTerm& t, int k, int start, std::vector<Face>& acc,
                      AdmissibilityReport& rep) {
  if (static_cast<int>(acc.size()) == k) {
    check_face_tuple(t, acc, rep);
    return;
  }
  for (int i = start; i < t.n(); ++i)
    for (int eps = 0; eps <= 1; ++eps) {
      acc.push_back(Face{i, eps});
      enumerate_tuples(t, k, i + 1, acc, rep);
      acc.pop_back();
    }
}

}  // namespace

AdmissibilityReport is_admissible(const CycleTerm& t) {
  AdmissibilityReport rep;
  int kmax = std::min(t.n(), t.d() + 1);
  for (int k = 1; k <= kmax; ++k) {
    std::vector<Face> acc;
    enumerate_tuples(t, k, 0, acc, rep);
  }
  return rep;
}

AdmissibilityReport is_admissible_sum(const CycleSum& s) {
  AdmissibilityReport rep;
  for (const auto& [k, t] : s.terms()) {
    AdmissibilityReport r = is_admissible(t);
    if (!r.admissible) rep.admissible = false;
    for (auto& fc : r.codim1) rep.codim1.push_back(std::move(fc));
    for (auto& fc : r.violations) rep.violations.push_back(std::move(fc));
  }
  return rep;
}

std::string AdmissibilityReport::summary() const {
  std::ostringstream os;
  os << (admissible ? "admissible" : "NOT admissible");
  os << " (" << codim1.size() << " codim-1 faces checked";
  if (!violations.empty()) os << ", " << violations.size() << " violations";
  os << ")";
  return os.str();
}

std::optional<std::vector<int>> face_containment(const CycleTerm& t, const Face& f) {
  // The cycle is the closure of its parametrization, so the face can contain
  // components where some parameters sit at infinity.  Scan every chart
  // obtained by inverting a subset of the parameters; the inverted parameters
  // are pinned to 0 there (the affine chart is the empty subset).
  std::vector<int> marks;
  int np = static_cast<int>(t.params.size());
  for (int mask = 0; mask < (1 << np); ++mask) {
    Subst inv;
    for (int i = 0; i < np; ++i)
      if (mask & (1 << i)) {
        int p = t.params[i];
        inv[p] = RatFunc::sym(p).inverse();
      }
    std::vector<RatFunc> coords;
    bool bad_chart = false;
    for (const RatFunc& c : t.coords) {
      try {
        coords.push_back(mask ? substitute(c, inv) : c);
      } catch (const AlgebraError&) {
        bad_chart = true;
        break;
      }
    }
    if (bad_chart) continue;
    std::vector<MPoly> constraints{face_equation(coords[f.index], f.eps)};
    for (int i = 0; i < np; ++i)
      if (mask & (1 << i)) {
        constraints.push_back(MPoly::sym(t.params[i]));
      }
    for (const LocusLeaf& leaf : decompose_locus(constraints, t.params)) {
      // The face is pure of dimension d-1; lower-dimensional leaves are
      // embedded in components already accounted for (typically the boundary
      // at infinity of an affine component seen in another chart).
      if (static_cast<int>(leaf.free_params.size()) != t.d() - 1) continue;
      bool contained = false;
      for (int j = 0; j < t.n(); ++j) {
        if (j == f.index) continue;
        try {
          ExtValue v = subst_ext(coords[j], leaf.chain);
          if (!v.infinite && v.v.is_one()) {
            contained = true;
            if (std::find(marks.begin(), marks.end(), j) == marks.end())
              marks.push_back(j);
          }
        } catch (const AlgebraError&) {
        }
      }
      if (!contained) return std::nullopt;
    }
  }
  std::sort(marks.begin(), marks.end());
  return marks;
}

NegligibilityReport is_negligible(const CycleTerm& t) {
  NegligibilityReport rep;
  // Pattern 1: a coordinate constant along the cycle (and not 0, which would
  // put the cycle inside a face).
  for (int j = 0; j < t.n(); ++j) {
    if (t.coords[j].is_cycle_constant() && !t.coords[j].is_zero()) {
      rep.negligible = true;
      rep.pattern = "constant_coordinate";
      rep.coordinate = j;
      return rep;
    }
  }
  // Pattern 2: the parameters split into groups never sharing a coordinate,
  // every parameter being used; the cycle is then a product of cycles of
  // lower dimension, each sitting in the image of a degenerate product map.
  if (t.d() >= 2) {
    std::map<int, int> comp;  // union-find parent
    for (int p : t.params) comp[p] = p;
    std::function<int(int)> find = [&](int a) {
      while (comp[a] != a) a = comp[a] = comp[comp[a]];
      return a;
    };
    std::vector<bool> used(t.params.size(), false);
    for (int j = 0; j < t.n(); ++j) {
      std::vector<int> here;
      for (size_t pi = 0; pi < t.params.size(); ++pi)
        if (t.coords[j].involves(t.params[pi])) {
          used[pi] = true;
          here.push_back(t.params[pi]);
        }
      for (size_t i = 1; i < here.size(); ++i) comp[find(here[i])] = find(here[0]);
    }
    bool all_used = std::all_of(used.begin(), used.end(), [](bool b) { return b; });
    std::vector<int> roots;
    for (int p : t.params) {
      int r = find(p);
      if (std::find(roots.begin(), roots.end(), r) == roots.end()) roots.push_back(r);
    }
    if (all_used && roots.size() >= 2) {
      rep.negligible = true;
      rep.pattern = "disjoint_product";
      return rep;
    }
  }
  return rep;
}

DegeneracyReport is_degenerate(const CycleTerm& t) {
  DegeneracyReport rep;
  // Rank of the Jacobian d(coords)/d(params), computed exactly by Gaussian
  // elimination over the rational function field.
  std::vector<std::vector<RatFunc>> m(t.d());
  for (int r = 0; r < t.d(); ++r)
    for (int j = 0; j < t.n(); ++j) m[r].push_back(t.coords[j].derivative(t.params[r]));
  int rank = 0;
  int cols = t.n();
  int row = 0;
  for (int c = 0; c < cols && row < t.d(); ++c) {
    int piv = -1;
    for (int r = row; r < t.d(); ++r)
      if (!m[r][c].is_zero()) { piv = r; break; }
    if (piv < 0) continue;
    std::swap(m[row], m[piv]);
    for (int r = row + 1; r < t.d(); ++r) {
      if (m[r][c].is_zero()) continue;
      RatFunc factor = m[r][c] / m[row][c];
      for (int cc = c; cc < cols; ++cc) m[r][cc] = m[r][cc] - factor * m[row][cc];
    }
    ++row;
    ++rank;
  }
  rep.rank = rank;
  rep.degenerate = rank < t.d();
  return rep;
}

}  // namespace chow
