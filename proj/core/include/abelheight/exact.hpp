// Exact arithmetic: integers and rationals (GMP), dense univariate and sparse
// multivariate polynomials, resultants, discriminants and p-adic valuations.
#pragma once

#include <gmpxx.h>

#include <map>
#include <string>
#include <vector>

namespace ah {

using Int = mpz_class;
using Rat = mpq_class;

// n/d in lowest terms (the two-argument mpq_class constructor does not reduce).
inline Rat frac(const Int& n, const Int& d) {
  Rat r(n, d);
  r.canonicalize();
  return r;
}

// Dense univariate polynomial over Q, coefficients in ascending degree.
class QPoly {
 public:
  QPoly() = default;
  explicit QPoly(std::vector<Rat> c);
  static QPoly constant(const Rat& c);
  static QPoly x_minus(const Rat& r);  // X - r
  static QPoly monomial(const Rat& c, int d);

  int deg() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero
  bool is_zero() const { return c_.empty(); }
  const Rat& operator[](int i) const;
  Rat coeff(int i) const { return i >= 0 && i <= deg() ? c_[i] : Rat(0); }
  const Rat& lead() const { return c_.back(); }
  const std::vector<Rat>& coeffs() const { return c_; }
  Rat eval(const Rat& x) const;
  QPoly monic() const;
  QPoly derivative() const;

  friend QPoly operator+(const QPoly& a, const QPoly& b);
  friend QPoly operator-(const QPoly& a, const QPoly& b);
  friend QPoly operator-(const QPoly& a);
  friend QPoly operator*(const QPoly& a, const QPoly& b);
  friend QPoly operator*(const Rat& s, const QPoly& a);
  friend bool operator==(const QPoly& a, const QPoly& b) { return a.c_ == b.c_; }
  std::string str(const char* var = "X") const;

 private:
  void trim();
  std::vector<Rat> c_;
};

// q, r with a = q*b + r and deg r < deg b.
void divmod(const QPoly& a, const QPoly& b, QPoly& q, QPoly& r);
QPoly operator/(const QPoly& a, const QPoly& b);
QPoly operator%(const QPoly& a, const QPoly& b);
// Monic gcd d and cofactors s, t with d = s*a + t*b.
QPoly xgcd(const QPoly& a, const QPoly& b, QPoly& s, QPoly& t);

// Dense univariate integer polynomial, coefficients in ascending degree.
using IntPoly = std::vector<Int>;

int deg(const IntPoly& f);
// Determinant of an integer matrix by fraction-free elimination.
Int det_bareiss(std::vector<std::vector<Int>> m);
// Sylvester resultant of two integer polynomials.
Int resultant(const IntPoly& f, const IntPoly& g);
// disc(F) = (-1)^{n(n-1)/2} Res(F, F') / lead(F); requires deg F = 5.
Int poly_discriminant(const IntPoly& f);
// Discriminant for any degree >= 1.
Int discriminant_any(const IntPoly& f);

// Sparse multivariate integer polynomial over a fixed list of variable names.
class MPoly {
 public:
  using Exps = std::vector<int>;
  MPoly() = default;
  explicit MPoly(std::vector<std::string> vars) : vars_(std::move(vars)) {}
  static MPoly constant(const std::vector<std::string>& vars, const Int& c);
  static MPoly variable(const std::vector<std::string>& vars, const std::string& name);
  // Parse a polynomial such as "x^2 + 3*x*y - 2"; variables must be in `vars`.
  static MPoly parse(const std::vector<std::string>& vars, const std::string& text);

  const std::vector<std::string>& vars() const { return vars_; }
  const std::map<Exps, Int>& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }
  int var_index(const std::string& name) const;
  int degree_in(int var) const;
  // Coefficient of var^d as a polynomial in the same variable list.
  MPoly coeff_in(int var, int d) const;
  void add_term(const Exps& e, const Int& c);

  friend MPoly operator+(const MPoly& a, const MPoly& b);
  friend MPoly operator-(const MPoly& a, const MPoly& b);
  friend MPoly operator-(const MPoly& a);
  friend MPoly operator*(const MPoly& a, const MPoly& b);
  friend bool operator==(const MPoly& a, const MPoly& b) { return a.t_ == b.t_; }
  // Exact division; throws if b does not divide a.
  friend MPoly exact_div(const MPoly& a, const MPoly& b);
  std::string str() const;

 private:
  std::vector<std::string> vars_;
  std::map<Exps, Int> t_;
};

// Res_var(f, g) via the Sylvester determinant with polynomial entries.
MPoly resultant(const MPoly& f, const MPoly& g, const std::string& var);

bool is_prime(const Int& p);
// ord_p(q) for q != 0 and p prime.
long valuation(const Rat& q, const Int& p);
long valuation(const Int& n, const Int& p);
// Distinct prime factors of |n| by trial division and Pollard rho.
std::vector<Int> prime_factors(const Int& n);

}  // namespace ah
