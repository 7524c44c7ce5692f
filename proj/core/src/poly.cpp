#include "chow/poly.hpp"

#include <algorithm>
#include <sstream>

namespace chow {

std::string rat_str(const Rat& q) {
  Rat r(q);
  r.canonicalize();
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

int sym_index(char name) {
  for (int i = 0; i < kNumSyms; ++i)
    if (kSymNames[i] == name) return i;
  throw AlgebraError(std::string("unknown symbol: ") + name);
}

int Mono::deg() const {
  int d = 0;
  for (auto v : e) d += v;
  return d;
}

bool MonoGrlexLess::operator()(const Mono& m, const Mono& n) const {
  int dm = m.deg(), dn = n.deg();
  if (dm != dn) return dm < dn;
  return m.e < n.e;
}

MPoly::MPoly(const Rat& c) {
  if (c != 0) {
    Rat cc(c);
    cc.canonicalize();
    t_[Mono{}] = cc;
  }
}

MPoly::MPoly(long c) : MPoly(Rat(c)) {}

MPoly MPoly::sym(int s) {
  if (s < 0 || s >= kNumSyms) throw AlgebraError("symbol index out of range");
  MPoly p;
  Mono m;
  m.e[s] = 1;
  p.t_[m] = Rat(1);
  return p;
}

MPoly MPoly::from_terms(TermMap t) {
  MPoly p;
  p.t_ = std::move(t);
  p.strip_zeros();
  return p;
}

void MPoly::strip_zeros() {
  for (auto it = t_.begin(); it != t_.end();) {
    it->second.canonicalize();
    if (it->second == 0)
      it = t_.erase(it);
    else
      ++it;
  }
}

bool MPoly::is_constant() const {
  return t_.empty() || (t_.size() == 1 && t_.begin()->first == Mono{});
}

Rat MPoly::constant() const {
  if (t_.empty()) return Rat(0);
  if (!is_constant()) throw AlgebraError("constant() on non-constant poly");
  return t_.begin()->second;
}

int MPoly::total_deg() const {
  int d = -1;
  for (auto& [m, c] : t_) d = std::max(d, m.deg());
  return d;
}

int MPoly::deg(int sym) const {
  int d = -1;
  for (auto& [m, c] : t_) d = std::max(d, int(m.e[sym]));
  return d;
}

bool MPoly::involves(int sym) const {
  for (auto& [m, c] : t_)
    if (m.e[sym] > 0) return true;
  return false;
}

std::vector<int> MPoly::support() const {
  std::vector<int> out;
  for (int s = 0; s < kNumSyms; ++s)
    if (involves(s)) out.push_back(s);
  return out;
}

const Mono& MPoly::lead_mono() const {
  if (t_.empty()) throw AlgebraError("lead_mono of zero");
  return t_.rbegin()->first;
}

const Rat& MPoly::lead_coeff() const {
  if (t_.empty()) throw AlgebraError("lead_coeff of zero");
  return t_.rbegin()->second;
}

MPoly MPoly::monic() const {
  if (is_zero()) return *this;
  Rat inv = 1 / lead_coeff();
  return *this * inv;
}

MPoly MPoly::operator-() const {
  MPoly r(*this);
  for (auto& [m, c] : r.t_) c = -c;
  return r;
}

MPoly MPoly::operator+(const MPoly& o) const {
  MPoly r(*this);
  for (auto& [m, c] : o.t_) {
    auto [it, fresh] = r.t_.try_emplace(m, c);
    if (!fresh) it->second += c;
  }
  r.strip_zeros();
  return r;
}

MPoly MPoly::operator-(const MPoly& o) const { return *this + (-o); }

MPoly MPoly::operator*(const MPoly& o) const {
  MPoly r;
  for (auto& [m1, c1] : t_)
    for (auto& [m2, c2] : o.t_) {
      Mono m;
      for (int i = 0; i < kNumSyms; ++i) m.e[i] = int16_t(m1.e[i] + m2.e[i]);
      auto [it, fresh] = r.t_.try_emplace(m, c1 * c2);
      if (!fresh) it->second += c1 * c2;
    }
  r.strip_zeros();
  return r;
}

MPoly MPoly::operator*(const Rat& c) const {
  if (c == 0) return MPoly();
  MPoly r(*this);
  for (auto& [m, co] : r.t_) co *= c;
  r.strip_zeros();
  return r;
}

MPoly MPoly::pow(int k) const {
  if (k < 0) throw AlgebraError("negative poly power");
  MPoly r(Rat(1));
  MPoly base(*this);
  while (k > 0) {
    if (k & 1) r = r * base;
    base = base * base;
    k >>= 1;
  }
  return r;
}

std::vector<MPoly> MPoly::coeffs_wrt(int sym) const {
  int d = std::max(deg(sym), 0);
  std::vector<TermMap> maps(size_t(d + 1));
  for (auto& [m, c] : t_) {
    Mono mm = m;
    int k = mm.e[sym];
    mm.e[sym] = 0;
    maps[size_t(k)][mm] = c;
  }
  std::vector<MPoly> out;
  out.reserve(maps.size());
  for (auto& mp : maps) out.push_back(MPoly::from_terms(std::move(mp)));
  return out;
}

MPoly MPoly::assemble_wrt(int sym, const std::vector<MPoly>& cs) {
  MPoly r;
  MPoly v = MPoly::sym(sym);
  for (size_t i = 0; i < cs.size(); ++i) r = r + cs[i] * v.pow(int(i));
  return r;
}

MPoly MPoly::derivative(int sym) const {
  TermMap out;
  for (auto& [m, c] : t_) {
    if (m.e[sym] == 0) continue;
    Mono mm = m;
    int k = mm.e[sym];
    mm.e[sym] = int16_t(k - 1);
    auto [it, fresh] = out.try_emplace(mm, c * k);
    if (!fresh) it->second += c * k;
  }
  return MPoly::from_terms(std::move(out));
}

std::optional<MPoly> MPoly::divided_by(const MPoly& d) const {
  if (d.is_zero()) throw AlgebraError("division by zero poly");
  MPoly rem(*this), quot;
  while (!rem.is_zero()) {
    const Mono& lm = rem.lead_mono();
    const Mono& dm = d.lead_mono();
    Mono q;
    for (int i = 0; i < kNumSyms; ++i) {
      int diff = lm.e[i] - dm.e[i];
      if (diff < 0) return std::nullopt;
      q.e[i] = int16_t(diff);
    }
    Rat qc = rem.lead_coeff() / d.lead_coeff();
    TermMap single;
    single[q] = qc;
    MPoly qt = MPoly::from_terms(std::move(single));
    quot = quot + qt;
    rem = rem - qt * d;
  }
  return quot;
}

Rat MPoly::eval(const std::array<Rat, kNumSyms>& vals) const {
  Rat acc(0);
  for (auto& [m, c] : t_) {
    Rat term(c);
    for (int i = 0; i < kNumSyms; ++i)
      for (int k = 0; k < m.e[i]; ++k) term *= vals[size_t(i)];
    acc += term;
  }
  return acc;
}

int MPoly::cmp(const MPoly& p, const MPoly& q) {
  // descending grlex walk; first difference decides.
  auto ip = p.t_.rbegin(), iq = q.t_.rbegin();
  MonoGrlexLess less;
  for (; ip != p.t_.rend() && iq != q.t_.rend(); ++ip, ++iq) {
    if (less(ip->first, iq->first)) return -1;
    if (less(iq->first, ip->first)) return 1;
    int c = ::cmp(ip->second, iq->second);
    if (c != 0) return c < 0 ? -1 : 1;
  }
  if (ip == p.t_.rend() && iq == q.t_.rend()) return 0;
  return ip == p.t_.rend() ? -1 : 1;
}

std::string MPoly::str() const {
  if (t_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = t_.rbegin(); it != t_.rend(); ++it) {
    Rat c = it->second;
    bool neg = c < 0;
    Rat ac = abs(c);
    if (first) {
      if (neg) os << "-";
    } else {
      os << (neg ? " - " : " + ");
    }
    first = false;
    std::vector<std::string> factors;
    if (ac != 1 || it->first == Mono{}) factors.push_back(rat_str(ac));
    for (int i = 0; i < kNumSyms; ++i) {
      int e = it->first.e[i];
      if (e == 1)
        factors.push_back(std::string(1, kSymNames[i]));
      else if (e > 1)
        factors.push_back(std::string(1, kSymNames[i]) + "^" + std::to_string(e));
    }
    for (size_t i = 0; i < factors.size(); ++i) {
      if (i) os << "*";
      os << factors[i];
    }
  }
  return os.str();
}

namespace {

// pseudo-remainder of a by b with respect to sym (b has positive degree).
MPoly prem(const MPoly& a, const MPoly& b, int sym) {
  int db = b.deg(sym);
  MPoly r = a;
  auto bc = b.coeffs_wrt(sym);
  MPoly blc = bc[size_t(db)];
  int guard = 0;
  while (!r.is_zero() && r.deg(sym) >= db) {
    if (++guard > 10000) throw AlgebraError("prem runaway");
    int dr = r.deg(sym);
    auto rc = r.coeffs_wrt(sym);
    MPoly rl = rc[size_t(dr)];
    MPoly shift = MPoly::sym(sym).pow(dr - db);
    r = r * blc - b * rl * shift;
  }
  return r;
}

}  // namespace

MPoly poly_content_wrt(const MPoly& p, int sym) {
  MPoly g;
  for (auto& c : p.coeffs_wrt(sym)) {
    if (c.is_zero()) continue;
    g = g.is_zero() ? c.monic() : poly_gcd(g, c);
    if (g.is_constant()) break;
  }
  return g.is_zero() ? MPoly(Rat(0)) : g;
}

MPoly poly_gcd(const MPoly& p, const MPoly& q) {
  if (p.is_zero()) return q.is_zero() ? q : q.monic();
  if (q.is_zero()) return p.monic();
  if (p.is_constant() || q.is_constant()) return MPoly(Rat(1));
  // main variable: smallest symbol present in either operand
  int v = -1;
  for (int s = 0; s < kNumSyms && v < 0; ++s)
    if (p.involves(s) || q.involves(s)) v = s;
  if (!p.involves(v)) return poly_gcd(p, poly_content_wrt(q, v));
  if (!q.involves(v)) return poly_gcd(q, poly_content_wrt(p, v));
  MPoly cp = poly_content_wrt(p, v), cq = poly_content_wrt(q, v);
  MPoly pp = *p.divided_by(cp), qq = *q.divided_by(cq);
  MPoly cg = poly_gcd(cp, cq);
  MPoly A = pp, B = qq;
  if (A.deg(v) < B.deg(v)) std::swap(A, B);
  while (true) {
    MPoly R = prem(A, B, v);
    if (R.is_zero()) break;
    if (R.deg(v) <= 0) {
      // coprime in v: primitive-part gcd is trivial
      return cg.monic();
    }
    MPoly cr = poly_content_wrt(R, v);
    R = *R.divided_by(cr);
    A = B;
    B = R;
  }
  MPoly cb = poly_content_wrt(B, v);
  MPoly g = (cg * (*B.divided_by(cb))).monic();
  return g;
}

std::optional<MPoly> poly_sqrt(const MPoly& p) {
  if (p.is_zero()) return MPoly();
  if (p.is_constant()) {
    Rat c = p.constant();
    if (c < 0) return std::nullopt;
    mpz_class num = c.get_num(), den = c.get_den();
    mpz_class sn, sd;
    mpz_sqrt(sn.get_mpz_t(), num.get_mpz_t());
    mpz_sqrt(sd.get_mpz_t(), den.get_mpz_t());
    if (sn * sn != num || sd * sd != den) return std::nullopt;
    return MPoly(Rat(sn) / Rat(sd));
  }
  int v = p.support().front();
  int d = p.deg(v);
  if (d % 2 != 0) return std::nullopt;
  auto pc = p.coeffs_wrt(v);
  int m = d / 2;
  std::vector<MPoly> q(size_t(m + 1));
  auto top = poly_sqrt(pc[size_t(d)]);
  if (!top) return std::nullopt;
  q[size_t(m)] = *top;
  // descending coefficient recovery: coeff of v^(m+i) in q^2 equals
  // 2 q_m q_i plus the ordered sum of q_j q_k over j+k = m+i with i<j,k<m.
  for (int i = m - 1; i >= 0; --i) {
    MPoly rhs = (size_t(m + i) < pc.size()) ? pc[size_t(m + i)] : MPoly();
    for (int j = i + 1; j <= m - 1; ++j) {
      int k = m + i - j;
      if (k >= i + 1 && k <= m - 1) rhs = rhs - q[size_t(j)] * q[size_t(k)];
    }
    auto qi = rhs.divided_by(q[size_t(m)] * Rat(2));
    if (!qi) return std::nullopt;
    q[size_t(i)] = *qi;
  }
  MPoly cand = MPoly::assemble_wrt(v, q);
  if (cand * cand == p) return cand;
  if (cand * cand == -p) return std::nullopt;
  // sign ambiguity of the top coefficient does not arise (monic-positive root),
  // any residual mismatch means p is not a square.
  return std::nullopt;
}

}  // namespace chow
