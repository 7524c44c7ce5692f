// Multivariate polynomials over Q in the fixed symbol set a,b,c,s,t,u,v,x,y,z.
// All arithmetic is exact (GMP rationals); there are no floating point numbers
// anywhere in this library.
#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace chow {

using Rat = mpq_class;

std::string rat_str(const Rat& q);  // "p/q" or "p"

struct AlgebraError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Symbol table. Order below is the documented global symbol order; it drives
// the graded-lex monomial order and every canonical-form tie break.
inline constexpr int kNumSyms = 10;
inline constexpr char kSymNames[kNumSyms + 1] = "abcstuvxyz";
// a,b,c,s,t,u,v are field parameters; x,y,z are cycle parameters.
inline constexpr int kFirstCycleSym = 7;
inline bool sym_is_cycle(int s) { return s >= kFirstCycleSym; }
int sym_index(char name);  // throws AlgebraError on unknown symbol

struct Mono {
  std::array<int16_t, kNumSyms> e{};
  int deg() const;
  bool operator==(const Mono&) const = default;
};

// graded lexicographic: higher total degree first, ties by exponent vector.
struct MonoGrlexLess {
  bool operator()(const Mono& m, const Mono& n) const;
};

class MPoly {
 public:
  // terms in ascending grlex order (std::map); zero poly has empty map.
  using TermMap = std::map<Mono, Rat, MonoGrlexLess>;

  MPoly() = default;
  explicit MPoly(const Rat& c);
  explicit MPoly(long c);
  static MPoly sym(int s);  // the symbol itself
  static MPoly from_terms(TermMap t);

  const TermMap& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }
  bool is_constant() const;
  Rat constant() const;  // requires is_constant()

  int total_deg() const;
  int deg(int sym) const;         // -1 for zero poly
  bool involves(int sym) const;
  std::vector<int> support() const;  // sorted list of symbols present

  const Mono& lead_mono() const;  // grlex-largest
  const Rat& lead_coeff() const;
  MPoly monic() const;  // divide by lead_coeff

  MPoly operator-() const;
  MPoly operator+(const MPoly&) const;
  MPoly operator-(const MPoly&) const;
  MPoly operator*(const MPoly&) const;
  MPoly operator*(const Rat&) const;
  MPoly pow(int k) const;
  bool operator==(const MPoly&) const = default;

  // coefficients with respect to one symbol: index i -> coeff of sym^i.
  std::vector<MPoly> coeffs_wrt(int sym) const;
  static MPoly assemble_wrt(int sym, const std::vector<MPoly>& cs);
  MPoly derivative(int sym) const;

  // exact division; nullopt if divisor does not divide exactly.
  std::optional<MPoly> divided_by(const MPoly& d) const;

  Rat eval(const std::array<Rat, kNumSyms>& vals) const;

  // deterministic total order on polynomials (canonical forms, tie breaks)
  static int cmp(const MPoly& p, const MPoly& q);

  std::string str() const;

 private:
  TermMap t_;
  void strip_zeros();
};

inline bool poly_less(const MPoly& p, const MPoly& q) { return MPoly::cmp(p, q) < 0; }

MPoly poly_gcd(const MPoly& p, const MPoly& q);             // monic result
MPoly poly_content_wrt(const MPoly& p, int sym);            // gcd of coeffs_wrt
std::optional<MPoly> poly_sqrt(const MPoly& p);             // exact square root

}  // namespace chow
