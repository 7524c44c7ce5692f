#include "chow/ratfunc.hpp"

namespace chow {

RatFunc::RatFunc(MPoly num, MPoly den) {
  if (den.is_zero()) throw ZeroDenominator("rational function with zero denominator");
  if (num.is_zero()) {
    num_ = MPoly();
    den_ = MPoly(Rat(1));
    return;
  }
  MPoly g = poly_gcd(num, den);
  num = *num.divided_by(g);
  den = *den.divided_by(g);
  Rat lc = den.lead_coeff();
  num_ = num * (1 / lc);
  den_ = den * (1 / lc);
}

RatFunc::RatFunc(MPoly p) : num_(std::move(p)), den_(Rat(1)) {}
RatFunc::RatFunc(const Rat& q) : num_(q), den_(Rat(1)) {}
RatFunc::RatFunc(long v) : num_(Rat(v)), den_(Rat(1)) {}

RatFunc RatFunc::sym(int s) { return RatFunc(MPoly::sym(s)); }

bool RatFunc::is_one() const { return num_ == den_; }

bool RatFunc::is_constant() const { return num_.is_constant() && den_.is_constant(); }

bool RatFunc::involves(int sym) const { return num_.involves(sym) || den_.involves(sym); }

std::vector<int> RatFunc::support() const {
  std::vector<int> out;
  for (int s = 0; s < kNumSyms; ++s)
    if (involves(s)) out.push_back(s);
  return out;
}

bool RatFunc::is_cycle_constant() const {
  for (int s = kFirstCycleSym; s < kNumSyms; ++s)
    if (involves(s)) return false;
  return true;
}

RatFunc RatFunc::operator-() const {
  RatFunc r(*this);
  r.num_ = -r.num_;
  return r;
}

RatFunc RatFunc::operator+(const RatFunc& o) const {
  return RatFunc(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

RatFunc RatFunc::operator-(const RatFunc& o) const { return *this + (-o); }

RatFunc RatFunc::operator*(const RatFunc& o) const {
  return RatFunc(num_ * o.num_, den_ * o.den_);
}

RatFunc RatFunc::operator/(const RatFunc& o) const {
  if (o.is_zero()) throw ZeroDenominator("division by zero rational function");
  return RatFunc(num_ * o.den_, den_ * o.num_);
}

RatFunc RatFunc::inverse() const {
  if (is_zero()) throw ZeroDenominator("inverse of zero");
  return RatFunc(den_, num_);
}

RatFunc RatFunc::pow(int k) const {
  if (k < 0) return inverse().pow(-k);
  RatFunc r(1L);
  RatFunc base(*this);
  while (k > 0) {
    if (k & 1) r = r * base;
    base = base * base;
    k >>= 1;
  }
  return r;
}

RatFunc RatFunc::derivative(int sym) const {
  // (n/d)' = (n'd - nd')/d^2
  return RatFunc(num_.derivative(sym) * den_ - num_ * den_.derivative(sym), den_ * den_);
}

int RatFunc::cmp(const RatFunc& f, const RatFunc& g) {
  int c = MPoly::cmp(f.num_, g.num_);
  if (c != 0) return c;
  return MPoly::cmp(f.den_, g.den_);
}

std::string RatFunc::str() const {
  if (den_ == MPoly(Rat(1))) return num_.str();
  return "(" + num_.str() + ")/(" + den_.str() + ")";
}

RatFunc subst_poly(const MPoly& p, const Subst& s) {
  // substitute symbol-by-symbol via coefficient expansion (degrees are small)
  RatFunc acc;
  // find a substituted symbol present in p
  int v = -1;
  for (auto& [sym, rep] : s)
    if (p.involves(sym)) {
      v = sym;
      break;
    }
  if (v < 0) return RatFunc(p);
  auto cs = p.coeffs_wrt(v);
  const RatFunc& arg = s.at(v);
  // Horner
  for (auto it = cs.rbegin(); it != cs.rend(); ++it) acc = acc * arg + subst_poly(*it, s);
  return acc;
}

ExtValue subst_ext(const RatFunc& f, const Subst& s) {
  RatFunc n = subst_poly(f.num(), s);
  RatFunc d = subst_poly(f.den(), s);
  if (d.is_zero()) {
    if (n.is_zero()) throw AlgebraError("indeterminate 0/0 under substitution");
    return ExtValue::inf();
  }
  return ExtValue::fin(n / d);
}

RatFunc substitute(const RatFunc& f, const Subst& s) {
  ExtValue v = subst_ext(f, s);
  if (v.infinite) throw ZeroDenominator("substitution produced infinity");
  return v.v;
}

RatOrInf specialize(const RatFunc& f, const std::array<Rat, kNumSyms>& vals) {
  Rat d = f.den().eval(vals);
  Rat n = f.num().eval(vals);
  if (d == 0) {
    if (n == 0) throw AlgebraError("indeterminate 0/0 under specialization");
    return {true, Rat(0)};
  }
  return {false, n / d};
}

BranchDecomp solve_branches(const MPoly& p, int sym) {
  if (p.is_zero()) throw AlgebraError("solve_branches on zero polynomial");
  BranchDecomp out;
  out.content = MPoly(Rat(1));
  MPoly q = p;
  if (!q.involves(sym)) {
    out.content = q;
    return out;
  }
  // strip sym-free content
  MPoly c = poly_content_wrt(q, sym);
  if (!c.is_constant()) {
    out.content = c;
    q = *q.divided_by(c);
  }
  // strip sym^k monomial factor -> branch sym = 0 with multiplicity k
  auto cs = q.coeffs_wrt(sym);
  size_t low = 0;
  while (low < cs.size() && cs[low].is_zero()) ++low;
  if (low > 0) {
    out.branches.push_back({RatFunc(), int(low)});
    q = *q.divided_by(MPoly::sym(sym).pow(int(low)));
    cs = q.coeffs_wrt(sym);
  }
  int d = q.deg(sym);
  if (d == 0) return out;
  if (d == 1) {
    out.branches.push_back({RatFunc(-cs[0], cs[1]), 1});
    return out;
  }
  if (d == 2) {
    MPoly A = cs[2], B = cs[1], C = cs[0];
    MPoly disc = B * B - A * C * Rat(4);
    if (disc.is_zero()) {
      out.branches.push_back({RatFunc(-B, A * Rat(2)), 2});
      return out;
    }
    auto sq = poly_sqrt(disc);
    if (!sq)
      throw UnsupportedLocus("quadratic locus with non-square discriminant in " +
                             std::string(1, kSymNames[sym]) + ": " + p.str());
    out.branches.push_back({RatFunc(-B + *sq, A * Rat(2)), 1});
    out.branches.push_back({RatFunc(-B - *sq, A * Rat(2)), 1});
    return out;
  }
  throw UnsupportedLocus("locus of degree " + std::to_string(d) + " in " +
                         std::string(1, kSymNames[sym]) + ": " + p.str());
}

}  // namespace chow
