#include "abelheight/exact.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <stdexcept>

namespace ah {

// ------------------------------------------------------------------ QPoly

QPoly::QPoly(std::vector<Rat> c) : c_(std::move(c)) { trim(); }

QPoly QPoly::constant(const Rat& c) { return QPoly(std::vector<Rat>{c}); }

QPoly QPoly::x_minus(const Rat& r) { return QPoly(std::vector<Rat>{-r, Rat(1)}); }

QPoly QPoly::monomial(const Rat& c, int d) {
  std::vector<Rat> v(d + 1);
  v[d] = c;
  return QPoly(std::move(v));
}

void QPoly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

const Rat& QPoly::operator[](int i) const { return c_.at(i); }

Rat QPoly::eval(const Rat& x) const {
  Rat r = 0;
  for (int i = deg(); i >= 0; --i) r = r * x + c_[i];
  return r;
}

QPoly QPoly::monic() const {
  if (is_zero()) return *this;
  Rat l = lead();
  std::vector<Rat> v(c_);
  for (auto& x : v) x /= l;
  return QPoly(std::move(v));
}

QPoly QPoly::derivative() const {
  if (deg() <= 0) return QPoly();
  std::vector<Rat> v(deg());
  for (int i = 1; i <= deg(); ++i) v[i - 1] = c_[i] * i;
  return QPoly(std::move(v));
}

QPoly operator+(const QPoly& a, const QPoly& b) {
  std::vector<Rat> v(std::max(a.c_.size(), b.c_.size()));
  for (size_t i = 0; i < v.size(); ++i) v[i] = a.coeff(i) + b.coeff(i);
  return QPoly(std::move(v));
}

QPoly operator-(const QPoly& a, const QPoly& b) {
  std::vector<Rat> v(std::max(a.c_.size(), b.c_.size()));
  for (size_t i = 0; i < v.size(); ++i) v[i] = a.coeff(i) - b.coeff(i);
  return QPoly(std::move(v));
}

QPoly operator-(const QPoly& a) {
  std::vector<Rat> v(a.c_);
  for (auto& x : v) x = -x;
  return QPoly(std::move(v));
}

QPoly operator*(const QPoly& a, const QPoly& b) {
  if (a.is_zero() || b.is_zero()) return QPoly();
  std::vector<Rat> v(a.c_.size() + b.c_.size() - 1);
  for (size_t i = 0; i < a.c_.size(); ++i)
    for (size_t j = 0; j < b.c_.size(); ++j) v[i + j] += a.c_[i] * b.c_[j];
  return QPoly(std::move(v));
}

QPoly operator*(const Rat& s, const QPoly& a) {
  std::vector<Rat> v(a.c_);
  for (auto& x : v) x *= s;
  return QPoly(std::move(v));
}

std::string QPoly::str(const char* var) const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int i = deg(); i >= 0; --i) {
    if (c_[i] == 0) continue;
    Rat c = c_[i];
    if (!first) os << (c < 0 ? " - " : " + ");
    else if (c < 0) os << "-";
    Rat a = abs(c);
    bool one = (a == 1);
    if (!one || i == 0) os << a.get_str();
    if (i > 0) {
      if (!one) os << "*";
      os << var;
      if (i > 1) os << "^" << i;
    }
    first = false;
  }
  return os.str();
}

void divmod(const QPoly& a, const QPoly& b, QPoly& q, QPoly& r) {
  if (b.is_zero()) throw std::domain_error("polynomial division by zero");
  std::vector<Rat> rem(a.coeffs());
  int db = b.deg();
  std::vector<Rat> quo(std::max(0, a.deg() - db + 1));
  for (int i = a.deg(); i >= db; --i) {
    if (rem[i] == 0) continue;
    Rat c = rem[i] / b.lead();
    quo[i - db] = c;
    for (int j = 0; j <= db; ++j) rem[i - db + j] -= c * b[j];
  }
  q = QPoly(std::move(quo));
  r = QPoly(std::move(rem));
}

QPoly operator/(const QPoly& a, const QPoly& b) {
  QPoly q, r;
  divmod(a, b, q, r);
  return q;
}

QPoly operator%(const QPoly& a, const QPoly& b) {
  QPoly q, r;
  divmod(a, b, q, r);
  return r;
}

QPoly xgcd(const QPoly& a, const QPoly& b, QPoly& s, QPoly& t) {
  QPoly r0 = a, r1 = b;
  QPoly s0 = QPoly::constant(1), s1, t0, t1 = QPoly::constant(1);
  while (!r1.is_zero()) {
    QPoly q, r;
    divmod(r0, r1, q, r);
    r0 = r1;
    r1 = r;
    QPoly ns = s0 - q * s1;
    s0 = s1;
    s1 = ns;
    QPoly nt = t0 - q * t1;
    t0 = t1;
    t1 = nt;
  }
  if (r0.is_zero()) {
    s = QPoly();
    t = QPoly();
    return r0;
  }
  Rat l = 1 / r0.lead();
  s = l * s0;
  t = l * t0;
  return l * r0;
}

// --------------------------------------------------------- integer polys

int deg(const IntPoly& f) {
  int d = static_cast<int>(f.size()) - 1;
  while (d >= 0 && f[d] == 0) --d;
  return d;
}

Int det_bareiss(std::vector<std::vector<Int>> m) {
  size_t n = m.size();
  if (n == 0) return 1;
  Int prev = 1;
  int sign = 1;
  for (size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      size_t r = k + 1;
      while (r < n && m[r][k] == 0) ++r;
      if (r == n) return 0;
      std::swap(m[k], m[r]);
      sign = -sign;
    }
    for (size_t i = k + 1; i < n; ++i) {
      for (size_t j = k + 1; j < n; ++j) {
        Int v = m[i][j] * m[k][k] - m[i][k] * m[k][j];
        mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
        m[i][j] = v;
      }
    }
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

namespace {

template <class T>
std::vector<std::vector<T>> sylvester(const std::vector<T>& f, int df, const std::vector<T>& g,
                                      int dg, const T& zero) {
  int n = df + dg;
  std::vector<std::vector<T>> m(n, std::vector<T>(n, zero));
  for (int i = 0; i < dg; ++i)
    for (int j = 0; j <= df; ++j) m[i][i + j] = f[df - j];
  for (int i = 0; i < df; ++i)
    for (int j = 0; j <= dg; ++j) m[dg + i][i + j] = g[dg - j];
  return m;
}

}  // namespace

Int resultant(const IntPoly& f, const IntPoly& g) {
  int df = deg(f), dg = deg(g);
  if (df < 0 || dg < 0) return 0;
  Int r;
  if (df == 0) {
    mpz_pow_ui(r.get_mpz_t(), f[0].get_mpz_t(), static_cast<unsigned long>(dg));
    return r;
  }
  if (dg == 0) {
    mpz_pow_ui(r.get_mpz_t(), g[0].get_mpz_t(), static_cast<unsigned long>(df));
    return r;
  }
  return det_bareiss(sylvester<Int>(f, df, g, dg, Int(0)));
}

Int discriminant_any(const IntPoly& f) {
  int n = deg(f);
  if (n < 1) throw std::domain_error("discriminant of a constant polynomial");
  IntPoly fp(n);
  for (int i = 1; i <= n; ++i) fp[i - 1] = f[i] * i;
  Int r = resultant(f, fp);
  Int q;
  mpz_divexact(q.get_mpz_t(), r.get_mpz_t(), f[n].get_mpz_t());
  if ((n * (n - 1) / 2) % 2) q = -q;
  return q;
}

Int poly_discriminant(const IntPoly& f) {
  if (deg(f) != 5) throw std::domain_error("poly_discriminant expects a polynomial of degree 5");
  return discriminant_any(f);
}

// ------------------------------------------------------------------ MPoly

MPoly MPoly::constant(const std::vector<std::string>& vars, const Int& c) {
  MPoly p(vars);
  p.add_term(Exps(vars.size(), 0), c);
  return p;
}

MPoly MPoly::variable(const std::vector<std::string>& vars, const std::string& name) {
  MPoly p(vars);
  Exps e(vars.size(), 0);
  e.at(p.var_index(name)) = 1;
  p.add_term(e, 1);
  return p;
}

int MPoly::var_index(const std::string& name) const {
  for (size_t i = 0; i < vars_.size(); ++i)
    if (vars_[i] == name) return static_cast<int>(i);
  throw std::domain_error("unknown variable " + name);
}

void MPoly::add_term(const Exps& e, const Int& c) {
  if (c == 0) return;
  auto it = t_.find(e);
  if (it == t_.end()) {
    t_.emplace(e, c);
  } else {
    it->second += c;
    if (it->second == 0) t_.erase(it);
  }
}

int MPoly::degree_in(int var) const {
  int d = -1;
  for (auto& [e, c] : t_) d = std::max(d, e[var]);
  return d;
}

MPoly MPoly::coeff_in(int var, int d) const {
  MPoly r(vars_);
  for (auto& [e, c] : t_) {
    if (e[var] != d) continue;
    Exps f = e;
    f[var] = 0;
    r.add_term(f, c);
  }
  return r;
}

namespace {

const std::vector<std::string>& pick_vars(const MPoly& a, const MPoly& b) {
  if (!a.vars().empty() && !b.vars().empty() && a.vars() != b.vars())
    throw std::domain_error("polynomials over different variable lists");
  return a.vars().empty() ? b.vars() : a.vars();
}

}  // namespace

MPoly operator+(const MPoly& a, const MPoly& b) {
  MPoly r(pick_vars(a, b));
  r.t_ = a.t_;
  for (auto& [e, c] : b.t_) r.add_term(e, c);
  return r;
}

MPoly operator-(const MPoly& a) {
  MPoly r(a.vars_);
  for (auto& [e, c] : a.t_) r.t_.emplace(e, -c);
  return r;
}

MPoly operator-(const MPoly& a, const MPoly& b) { return a + (-b); }

MPoly operator*(const MPoly& a, const MPoly& b) {
  MPoly r(pick_vars(a, b));
  for (auto& [e1, c1] : a.t_) {
    for (auto& [e2, c2] : b.t_) {
      MPoly::Exps e(e1.size());
      for (size_t i = 0; i < e.size(); ++i) e[i] = e1[i] + e2[i];
      r.add_term(e, c1 * c2);
    }
  }
  return r;
}

MPoly exact_div(const MPoly& a, const MPoly& b) {
  if (b.is_zero()) throw std::domain_error("division by the zero polynomial");
  MPoly q(pick_vars(a, b)), rem = a;
  const auto& [be, bc] = *b.t_.rbegin();
  while (!rem.is_zero()) {
    const auto& [re, rc] = *rem.t_.rbegin();
    MPoly::Exps e(re.size());
    for (size_t i = 0; i < e.size(); ++i) {
      e[i] = re[i] - be[i];
      if (e[i] < 0) throw std::domain_error("inexact polynomial division");
    }
    if (!mpz_divisible_p(rc.get_mpz_t(), bc.get_mpz_t()))
      throw std::domain_error("inexact polynomial division");
    Int c;
    mpz_divexact(c.get_mpz_t(), rc.get_mpz_t(), bc.get_mpz_t());
    MPoly t(q.vars_);
    t.add_term(e, c);
    q.add_term(e, c);
    rem = rem - t * b;
  }
  return q;
}

std::string MPoly::str() const {
  if (t_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = t_.rbegin(); it != t_.rend(); ++it) {
    const auto& [e, c] = *it;
    bool has_var = std::any_of(e.begin(), e.end(), [](int x) { return x > 0; });
    if (!first) os << (c < 0 ? " - " : " + ");
    else if (c < 0) os << "-";
    Int a = abs(c);
    bool need_mul = false;
    if (a != 1 || !has_var) {
      os << a.get_str();
      need_mul = true;
    }
    for (size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (need_mul) os << "*";
      os << vars_[i];
      if (e[i] > 1) os << "^" << e[i];
      need_mul = true;
    }
    first = false;
  }
  return os.str();
}

namespace {

// Recursive-descent parser for + - * ^ and parentheses over integer literals and variables.
class Parser {
 public:
  Parser(const std::vector<std::string>& vars, const std::string& s) : vars_(vars), s_(s) {}
  MPoly run() {
    MPoly r = expr();
    skip();
    if (i_ != s_.size()) fail();
    return r;
  }

 private:
  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  [[noreturn]] void fail() { throw std::domain_error("cannot parse polynomial: " + s_); }
  MPoly expr() {
    skip();
    MPoly r(vars_);
    bool neg = false;
    if (i_ < s_.size() && (s_[i_] == '-' || s_[i_] == '+')) {
      neg = s_[i_] == '-';
      ++i_;
    }
    r = term();
    if (neg) r = -r;
    for (;;) {
      skip();
      if (i_ >= s_.size() || (s_[i_] != '+' && s_[i_] != '-')) break;
      char op = s_[i_++];
      MPoly t = term();
      r = op == '+' ? r + t : r - t;
    }
    return r;
  }
  MPoly term() {
    MPoly r = power();
    for (;;) {
      skip();
      if (i_ < s_.size() && s_[i_] == '*') {
        ++i_;
        r = r * power();
      } else {
        break;
      }
    }
    return r;
  }
  MPoly power() {
    MPoly b = atom();
    skip();
    if (i_ < s_.size() && s_[i_] == '^') {
      ++i_;
      skip();
      size_t st = i_;
      while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
      if (st == i_) fail();
      int n = std::stoi(s_.substr(st, i_ - st));
      MPoly r = MPoly::constant(vars_, 1);
      for (int k = 0; k < n; ++k) r = r * b;
      return r;
    }
    return b;
  }
  MPoly atom() {
    skip();
    if (i_ >= s_.size()) fail();
    if (s_[i_] == '(') {
      ++i_;
      MPoly r = expr();
      skip();
      if (i_ >= s_.size() || s_[i_] != ')') fail();
      ++i_;
      return r;
    }
    if (s_[i_] == '-') {
      ++i_;
      return -atom();
    }
    if (std::isdigit(static_cast<unsigned char>(s_[i_]))) {
      size_t st = i_;
      while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
      return MPoly::constant(vars_, Int(s_.substr(st, i_ - st)));
    }
    if (std::isalpha(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_') {
      size_t st = i_;
      while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) ++i_;
      return MPoly::variable(vars_, s_.substr(st, i_ - st));
    }
    fail();
  }

  const std::vector<std::string>& vars_;
  const std::string& s_;
  size_t i_ = 0;
};

}  // namespace

MPoly MPoly::parse(const std::vector<std::string>& vars, const std::string& text) {
  return Parser(vars, text).run();
}

MPoly resultant(const MPoly& f, const MPoly& g, const std::string& var) {
  int v = f.var_index(var);
  int df = f.degree_in(v), dg = g.degree_in(v);
  if (df < 1 || dg < 1) throw std::domain_error("resultant: polynomial constant in " + var);
  const auto& vars = f.vars();
  std::vector<MPoly> fc(df + 1, MPoly(vars)), gc(dg + 1, MPoly(vars));
  for (int i = 0; i <= df; ++i) fc[i] = f.coeff_in(v, i);
  for (int i = 0; i <= dg; ++i) gc[i] = g.coeff_in(v, i);
  auto m = sylvester<MPoly>(fc, df, gc, dg, MPoly(vars));
  size_t n = m.size();
  MPoly prev = MPoly::constant(vars, 1);
  bool neg = false;
  for (size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k].is_zero()) {
      size_t r = k + 1;
      while (r < n && m[r][k].is_zero()) ++r;
      if (r == n) return MPoly(vars);
      std::swap(m[k], m[r]);
      neg = !neg;
    }
    for (size_t i = k + 1; i < n; ++i)
      for (size_t j = k + 1; j < n; ++j)
        m[i][j] = exact_div(m[i][j] * m[k][k] - m[i][k] * m[k][j], prev);
    prev = m[k][k];
  }
  return neg ? -m[n - 1][n - 1] : m[n - 1][n - 1];
}

// ------------------------------------------------------------ number theory

bool is_prime(const Int& p) {
  if (p < 2) return false;
  return mpz_probab_prime_p(p.get_mpz_t(), 40) > 0;
}

long valuation(const Int& n, const Int& p) {
  if (n == 0) throw std::domain_error("valuation of zero");
  if (!is_prime(p)) throw std::domain_error("valuation at a non-prime");
  Int m = abs(n);
  return static_cast<long>(mpz_remove(m.get_mpz_t(), m.get_mpz_t(), p.get_mpz_t()));
}

long valuation(const Rat& q, const Int& p) {
  if (q == 0) throw std::domain_error("valuation of zero");
  return valuation(Int(q.get_num()), p) - valuation(Int(q.get_den()), p);
}

namespace {

Int pollard_brent(const Int& n) {
  if (mpz_even_p(n.get_mpz_t())) return 2;
  for (unsigned long c = 1;; ++c) {
    Int y = 2, x, g = 1, q = 1, ys;
    unsigned long r = 1, m = 128;
    auto f = [&](const Int& v) {
      Int w = v * v + c;
      mpz_mod(w.get_mpz_t(), w.get_mpz_t(), n.get_mpz_t());
      return w;
    };
    do {
      x = y;
      for (unsigned long i = 0; i < r; ++i) y = f(y);
      unsigned long k = 0;
      do {
        ys = y;
        for (unsigned long i = 0; i < std::min(m, r - k); ++i) {
          y = f(y);
          q = q * abs(x - y) % n;
        }
        mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
        k += m;
      } while (k < r && g == 1);
      r *= 2;
    } while (g == 1);
    if (g == n) {
      do {
        ys = f(ys);
        Int d = abs(x - ys);
        mpz_gcd(g.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

void factor_rec(const Int& n, std::vector<Int>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    out.push_back(n);
    return;
  }
  Int d = pollard_brent(n);
  factor_rec(d, out);
  factor_rec(n / d, out);
}

}  // namespace

std::vector<Int> prime_factors(const Int& n0) {
  if (n0 == 0) throw std::domain_error("prime_factors of zero");
  Int n = abs(n0);
  std::vector<Int> out;
  for (unsigned long p = 2; p < 10000 && n > 1; ++p) {
    if (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
      out.push_back(Int(p));
      while (mpz_divisible_ui_p(n.get_mpz_t(), p)) mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
    }
  }
  std::vector<Int> rest;
  factor_rec(n, rest);
  out.insert(out.end(), rest.begin(), rest.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace ah
