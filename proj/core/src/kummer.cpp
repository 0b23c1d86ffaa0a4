#include "abelheight/kummer.hpp"

#include <algorithm>
#include <cfenv>
#include <cmath>
#include <map>
#include <mutex>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>

namespace ah {

extern const char* const kDuplicationData;

// ------------------------------------------------------------ data table

const std::string& duplication_table_text() {
  static const std::string text(kDuplicationData);
  return text;
}

std::vector<DupTerm> parse_duplication_table(const std::string& text) {
  std::vector<DupTerm> out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto p = line.find_first_not_of(" \t\r");
    if (p == std::string::npos || line[p] == '#') continue;
    std::istringstream ls(line);
    DupTerm t;
    std::string c;
    ls >> t.index;
    for (auto& x : t.e) ls >> x;
    for (auto& x : t.m) ls >> x;
    ls >> c;
    if (!ls || t.index < 1 || t.index > 4)
      throw std::runtime_error("duplication table: bad line " + std::to_string(lineno));
    auto digits = c.find_first_not_of("+-") == 1 ? c.substr(1) : c;
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
      throw std::runtime_error("duplication table: bad coefficient on line " + std::to_string(lineno));
    t.c = Int(c[0] == '+' ? digits : c, 10);
    int kd = t.e[0] + t.e[1] + t.e[2] + t.e[3];
    if (kd != 4) throw std::runtime_error("duplication table: k-degree must be 4");
    out.push_back(t);
  }
  return out;
}

const std::vector<DupTerm>& duplication_table() {
  static const std::vector<DupTerm> table = parse_duplication_table(duplication_table_text());
  return table;
}

namespace {

void add_term(std::map<std::array<int, 4>, Int>& m, std::array<int, 4> e, const Int& c) {
  if (c == 0) return;
  m[e] += c;
}

KForm to_form(const std::map<std::array<int, 4>, Int>& m) {
  KForm f;
  for (auto& [e, c] : m)
    if (c != 0) f.push_back({e, c});
  return f;
}

}  // namespace

KummerForms kummer_forms(const Curve& C) {
  const auto& a = C.a();
  KummerForms out;
  std::array<std::map<std::array<int, 4>, Int>, 4> acc;
  for (const auto& t : duplication_table()) {
    Int c = t.c;
    for (int j = 0; j < 6; ++j)
      for (int r = 0; r < t.m[j]; ++r) c *= a[j];
    add_term(acc[t.index - 1], t.e, c);
  }
  for (int i = 0; i < 4; ++i) out.delta[i] = to_form(acc[i]);

  const Int &f0 = a[0], &f1 = a[1], &f2 = a[2], &f3 = a[3], &f4 = a[4], &f5 = a[5];
  std::map<std::array<int, 4>, Int> q;
  // K2 k4^2
  add_term(q, {0, 2, 0, 2}, 1);
  add_term(q, {1, 0, 1, 2}, -4);
  // K1 k4
  add_term(q, {3, 0, 0, 1}, -4 * f0);
  add_term(q, {2, 1, 0, 1}, -2 * f1);
  add_term(q, {2, 0, 1, 1}, -4 * f2);
  add_term(q, {1, 1, 1, 1}, -2 * f3);
  add_term(q, {1, 0, 2, 1}, -4 * f4);
  add_term(q, {0, 1, 2, 1}, -2 * f5);
  // K0
  add_term(q, {4, 0, 0, 0}, f1 * f1 - 4 * f0 * f2);
  add_term(q, {3, 1, 0, 0}, -4 * f0 * f3);
  add_term(q, {3, 0, 1, 0}, -2 * f1 * f3);
  add_term(q, {2, 2, 0, 0}, -4 * f0 * f4);
  add_term(q, {2, 1, 1, 0}, 4 * (f0 * f5 - f1 * f4));
  add_term(q, {2, 0, 2, 0}, f3 * f3 + 2 * f1 * f5 - 4 * f2 * f4);
  add_term(q, {1, 3, 0, 0}, -4 * f0 * f5);
  add_term(q, {1, 2, 1, 0}, -4 * f1 * f5);
  add_term(q, {1, 1, 2, 0}, -4 * f2 * f5);
  add_term(q, {1, 0, 3, 0}, -2 * f3 * f5);
  add_term(q, {0, 0, 4, 0}, f5 * f5);
  out.quartic = to_form(q);
  return out;
}

Rat eval_form(const KForm& f, const KummerPoint& k) {
  return eval_form<Rat>(f, k, [](const Int& c) { return Rat(c); });
}

Int eval_form(const KForm& f, const std::array<Int, 4>& k) {
  return eval_form<Int>(f, k, [](const Int& c) { return c; });
}

// ------------------------------------------------------------- the map

KummerPoint normalize(const KummerPoint& k) {
  for (int i = 0; i < 4; ++i) {
    if (k[i] != 0) {
      KummerPoint r;
      for (int j = 0; j < 4; ++j) r[j] = k[j] / k[i];
      return r;
    }
  }
  throw std::domain_error("normalize: zero Kummer tuple");
}

std::array<Int, 4> primitive(const KummerPoint& k0) {
  KummerPoint k = normalize(k0);
  Int l = 1;
  for (const auto& x : k) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
  std::array<Int, 4> r;
  Int g = 0;
  for (int i = 0; i < 4; ++i) {
    Rat t = k[i] * l;
    r[i] = t.get_num();
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), r[i].get_mpz_t());
  }
  for (auto& x : r) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
  return r;
}

KummerPoint kummer_map(const Curve& C, const Divisor& D) {
  int d = D.u.deg();
  if (d == 0) return {Rat(0), Rat(0), Rat(0), Rat(1)};
  if (d == 1) {
    Rat x1 = -D.u[0];
    return {Rat(0), Rat(1), x1, Rat(C.a()[5]) * x1 * x1};
  }
  // w = (F - v^2) / u; the fourth coordinate is -(w0 + u0 w2), which also covers u with a double root
  QPoly w = (C.F() - D.v * D.v) / D.u;
  Rat u0 = D.u[0], u1 = D.u[1];
  return {Rat(1), -u1, u0, -(w.coeff(0) + u0 * w.coeff(2))};
}

Rat kummer_quartic(const Curve& C, const KummerPoint& k) {
  return eval_form(kummer_forms(C).quartic, k);
}

Duplicated duplicate(const Curve& C, const KummerPoint& k) {
  KummerForms f = kummer_forms(C);
  KummerPoint d;
  for (int i = 0; i < 4; ++i) d[i] = eval_form(f.delta[i], k);
  if (d[0] == 0 && d[1] == 0 && d[2] == 0 && d[3] == 0)
    throw std::logic_error("duplicate: delta vanishes identically (point off the Kummer surface?)");
  return Duplicated{normalize(d), d[0]};
}

Ball naive_height(const KummerPoint& k, long prec) {
  auto c = primitive(k);
  Int m = 0;
  for (auto& x : c) m = std::max(m, Int(abs(x)));
  if (m == 1) return Ball(prec);
  return log(Ball::from_mpz(m, prec + 16)).with_prec(prec);
}

// ------------------------------------------------------------ finite places

std::vector<Int> bad_primes(const Curve& C) {
  Int n = 2 * C.a()[5] * C.disc();
  return prime_factors(n);
}

namespace {

long drop_bound(const Curve& C, const Int& p) {
  long v = valuation(C.disc(), p) + 2 * valuation(C.a()[5], p);
  if (p == 2) v += 4;
  return v;
}

long min_val_mod(const std::array<Int, 4>& d, const Int& p, long R) {
  long best = R;
  for (const auto& x : d) {
    if (x == 0) continue;
    Int y = x;
    long v = static_cast<long>(mpz_remove(y.get_mpz_t(), y.get_mpz_t(), p.get_mpz_t()));
    best = std::min(best, v);
  }
  return best;
}

// Valuation drops v_n = v_p(gcd delta(x_n)) for n < depth, from a primitive start.
std::vector<long> padic_drops(const KummerForms& f, const std::array<Int, 4>& x0, const Int& p,
                              int depth, long bound) {
  long R = std::max<long>(bound * depth + 8, 16);
  for (;;) {
    Int mod;
    mpz_pow_ui(mod.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(R));
    std::array<Int, 4> x;
    for (int i = 0; i < 4; ++i) mpz_mod(x[i].get_mpz_t(), x0[i].get_mpz_t(), mod.get_mpz_t());
    long prec = R;
    std::vector<long> drops;
    bool ok = true;
    for (int n = 0; n < depth; ++n) {
      Int m;
      mpz_pow_ui(m.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(prec));
      std::array<Int, 4> d;
      for (int i = 0; i < 4; ++i) {
        d[i] = eval_form(f.delta[i], x);
        mpz_mod(d[i].get_mpz_t(), d[i].get_mpz_t(), m.get_mpz_t());
      }
      long v = min_val_mod(d, p, prec);
      if (v >= prec) {
        ok = false;
        break;
      }
      drops.push_back(v);
      Int pv;
      mpz_pow_ui(pv.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(v));
      prec -= v;
      mpz_pow_ui(m.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(prec));
      for (int i = 0; i < 4; ++i) {
        mpz_divexact(x[i].get_mpz_t(), d[i].get_mpz_t(), pv.get_mpz_t());
        mpz_mod(x[i].get_mpz_t(), x[i].get_mpz_t(), m.get_mpz_t());
      }
    }
    if (ok) return drops;
    R *= 2;
    if (R > 1 << 20) throw PrecisionError("p-adic iteration: precision exhausted");
  }
}

Ball log_prime(const Int& p, long prec) { return log(Ball::from_mpz(p, prec + 16)).with_prec(prec); }

// sum_{n} 4^{-n-1} drops[n] as an exact rational
Rat weighted_drops(const std::vector<long>& drops) {
  Rat s = 0, w(1, 4);
  for (long v : drops) {
    s += w * v;
    w /= 4;
  }
  return s;
}

}  // namespace

long stoll_drop(const Curve& C, const KummerPoint& k, const Int& p) {
  KummerForms f = kummer_forms(C);
  auto x = primitive(k);
  std::array<Int, 4> d;
  for (int i = 0; i < 4; ++i) d[i] = eval_form(f.delta[i], x);
  long best = -1;
  for (const auto& y : d) {
    if (y == 0) continue;
    long v = valuation(y, p);
    if (best < 0 || v < best) best = v;
  }
  if (best < 0) throw std::logic_error("stoll_drop: delta vanishes");
  return best;
}

LocalHeightReport local_lambda_finite(const Curve& C, const Divisor& D, const Int& p, int depth,
                                      long prec) {
  if (!is_prime(p)) throw std::domain_error("local_lambda_finite: p is not prime");
  if (is_on_theta(D)) throw std::domain_error("local_lambda_finite: divisor lies on Theta");
  if (depth < 0) throw std::domain_error("local_lambda_finite: negative depth");
  KummerPoint k = normalize(kummer_map(C, D));
  long worst = 0;
  for (const auto& x : k)
    if (x != 0) worst = std::max(worst, -valuation(x, p));
  Ball lp = log_prime(p, prec);
  LocalHeightReport r;
  r.place = p.get_str();
  r.lambda_naive = Ball::from_si(worst, prec) * lp;
  KummerForms f = kummer_forms(C);
  long bound = drop_bound(C, p);
  r.drops = padic_drops(f, primitive(k), p, depth, bound);
  for (long v : r.drops)
    if (v > bound) throw std::logic_error("local_lambda_finite: valuation drop exceeds the Stoll bound");
  Rat s = weighted_drops(r.drops);
  Ball sum = -(Ball::from_mpq(s, prec) * lp);
  // tail lies in [-bound log p 4^-depth / 3, 0]
  Rat tail_q = frac(bound, 3);
  for (int i = 0; i < depth; ++i) tail_q /= 4;
  r.tail_bound = Ball::from_mpq(tail_q, prec) * lp;
  Ball half_tail = r.tail_bound.mul_2si(-1);
  Ball mu = sum - half_tail;
  mu.add_error(half_tail.mid()).add_error(half_tail.rad());
  r.mu = mu;
  r.truncation_depth = depth;
  r.lambda_canonical = r.lambda_naive + r.mu;
  return r;
}

// ------------------------------------------------------ archimedean bounds

namespace {

// Closed interval of doubles with outward rounding after every operation.
struct Iv {
  double lo = 0, hi = 0;
  Iv() = default;
  Iv(double a) : lo(a), hi(a) {}
  Iv(double a, double b) : lo(a), hi(b) {}
  static double dn(double x) { return std::nextafter(x, -INFINITY); }
  static double up(double x) { return std::nextafter(x, INFINITY); }
  friend Iv operator+(Iv a, Iv b) { return {dn(a.lo + b.lo), up(a.hi + b.hi)}; }
  friend Iv operator-(Iv a, Iv b) { return {dn(a.lo - b.hi), up(a.hi - b.lo)}; }
  friend Iv operator*(Iv a, Iv b) {
    double p[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
    return {dn(*std::min_element(p, p + 4)), up(*std::max_element(p, p + 4))};
  }
  bool has_zero() const { return lo <= 0 && hi >= 0; }
  double mig() const { return has_zero() ? 0.0 : std::min(std::fabs(lo), std::fabs(hi)); }
};

Iv iv_of(const Int& c) {
  double d = c.get_d();
  if (Int(d) == c) return Iv(d);
  return Iv(Iv::dn(d), Iv::up(d));
}

// x^n, tight for even n
Iv iv_pow(const Iv& x, int n) {
  if (n == 0) return Iv(1.0);
  Iv r = x;
  for (int i = 1; i < n; ++i) r = r * x;
  if (n % 2 == 0 && x.has_zero()) {
    double m = std::max(std::fabs(x.lo), std::fabs(x.hi));
    double h = m;
    for (int i = 1; i < n; ++i) h = Iv::up(h * m);
    return Iv(0.0, h);
  }
  return r;
}

struct IvTerm {
  std::array<int, 4> e;
  Iv c;
};
using IvForm = std::vector<IvTerm>;

IvForm iv_form(const KForm& f) {
  IvForm out;
  for (const auto& t : f) out.push_back({t.e, iv_of(t.c)});
  return out;
}

Iv eval_iv(const IvForm& f, const std::array<Iv, 4>& k) {
  std::array<std::array<Iv, 5>, 4> pw;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j <= 4; ++j) pw[i][j] = iv_pow(k[i], j);
  Iv s(0.0);
  for (const auto& t : f) s = s + pw[0][t.e[0]] * pw[1][t.e[1]] * pw[2][t.e[2]] * pw[3][t.e[3]] * t.c;
  return s;
}

KForm derivative(const KForm& f, int l) {
  KForm d;
  for (const auto& t : f) {
    if (t.e[l] == 0) continue;
    KTerm n = t;
    n.c *= t.e[l];
    n.e[l] -= 1;
    d.push_back(n);
  }
  return d;
}

struct FormSet {
  IvForm f;
  std::array<IvForm, 4> grad;
};

FormSet form_set(const KForm& f) {
  FormSet s;
  s.f = iv_form(f);
  for (int l = 0; l < 4; ++l) s.grad[l] = iv_form(derivative(f, l));
  return s;
}

// Mean-value enclosure intersected with the direct enclosure.
Iv enclose(const FormSet& s, const std::array<Iv, 4>& box) {
  Iv direct = eval_iv(s.f, box);
  std::array<Iv, 4> c;
  for (int i = 0; i < 4; ++i) {
    double m = 0.5 * (box[i].lo + box[i].hi);
    c[i] = Iv(m);
  }
  Iv mv = eval_iv(s.f, c);
  for (int l = 0; l < 4; ++l) {
    if (box[l].lo == box[l].hi) continue;
    mv = mv + eval_iv(s.grad[l], box) * (box[l] - c[l]);
  }
  return Iv(std::max(direct.lo, mv.lo), std::min(direct.hi, mv.hi));
}

// Smallest E_inf over random real points of the surface; an estimate only.
double sampled_min_e(const KummerForms& kf) {
  auto conv = [](const Int& c) { return c.get_d(); };
  std::mt19937_64 rng(0x5eed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  double best = INFINITY;
  auto consider = [&](const std::array<double, 4>& k) {
    double m = 0;
    for (double x : k) m = std::max(m, std::fabs(x));
    if (m == 0) return;
    double e = 0;
    for (int i = 0; i < 4; ++i) e = std::max(e, std::fabs(eval_form<double>(kf.delta[i], k, conv)));
    best = std::min(best, e / std::pow(m, 4));
  };
  consider({0, 0, 0, 1});
  for (int it = 0; it < 20000; ++it) {
    std::array<double, 4> k{U(rng), U(rng), U(rng), 0.0};
    if (it % 4 == 0) k[0] = 0;
    // K = A k4^2 + B k4 + C0
    std::array<double, 4> z = k;
    double C0 = eval_form<double>(kf.quartic, z, conv);
    z[3] = 1;
    double s1 = eval_form<double>(kf.quartic, z, conv);
    z[3] = -1;
    double s2 = eval_form<double>(kf.quartic, z, conv);
    double A = (s1 + s2) / 2 - C0, B = (s1 - s2) / 2;
    if (A == 0) {
      if (B != 0) {
        k[3] = -C0 / B;
        consider(k);
      }
      continue;
    }
    double disc = B * B - 4 * A * C0;
    if (disc < 0) continue;
    double r = std::sqrt(disc);
    k[3] = (-B + r) / (2 * A);
    consider(k);
    k[3] = (-B - r) / (2 * A);
    consider(k);
  }
  return best;
}

using Mono = std::array<int, 4>;

std::vector<Mono> monomials(int deg) {
  std::vector<Mono> out;
  for (int a = deg; a >= 0; --a)
    for (int b = deg - a; b >= 0; --b)
      for (int c = deg - a - b; c >= 0; --c) out.push_back({a, b, c, deg - a - b - c});
  return out;
}

// Lower bound on log E_inf from k_i^8 = sum_j g_ij delta_j + h_i K, which holds
// in degree 8: at |k_i| = max |k| = 1 on the surface, 1 <= sum_j |g_ij|_1 |delta_j|.
// The identities are solved over Q and checked exactly.
std::optional<double> ideal_log_lower(const KummerForms& kf) {
  const std::vector<Mono> shifts = monomials(4), targets = monomials(8);
  std::map<Mono, int> row;
  for (size_t r = 0; r < targets.size(); ++r) row[targets[r]] = static_cast<int>(r);
  std::array<const KForm*, 5> forms{&kf.delta[0], &kf.delta[1], &kf.delta[2], &kf.delta[3], &kf.quartic};
  const size_t nu = forms.size() * shifts.size(), nr = targets.size();
  std::vector<std::vector<Rat>> a(nr, std::vector<Rat>(nu + 4, 0));
  for (size_t f = 0; f < forms.size(); ++f)
    for (size_t s = 0; s < shifts.size(); ++s)
      for (const auto& t : *forms[f]) {
        Mono m;
        for (int l = 0; l < 4; ++l) m[l] = t.e[l] + shifts[s][l];
        a[row[m]][f * shifts.size() + s] += t.c;
      }
  for (int i = 0; i < 4; ++i) {
    Mono m{0, 0, 0, 0};
    m[i] = 8;
    a[row[m]][nu + i] = 1;
  }
  // forward elimination, smallest pivot first
  std::vector<size_t> pivot_col;
  size_t r = 0;
  for (size_t c = 0; c < nu && r < nr; ++c) {
    size_t best = nr;
    size_t best_size = 0;
    for (size_t i = r; i < nr; ++i) {
      if (a[i][c] == 0) continue;
      size_t sz = mpz_sizeinbase(a[i][c].get_num_mpz_t(), 2) + mpz_sizeinbase(a[i][c].get_den_mpz_t(), 2);
      if (best == nr || sz < best_size) {
        best = i;
        best_size = sz;
      }
    }
    if (best == nr) continue;
    std::swap(a[r], a[best]);
    for (size_t i = r + 1; i < nr; ++i) {
      if (a[i][c] == 0) continue;
      Rat f = a[i][c] / a[r][c];
      for (size_t k = c; k < nu + 4; ++k)
        if (a[r][k] != 0) a[i][k] -= f * a[r][k];
    }
    pivot_col.push_back(c);
    ++r;
  }
  for (size_t i = r; i < nr; ++i)
    for (int k = 0; k < 4; ++k)
      if (a[i][nu + k] != 0) return std::nullopt;
  Rat worst = 0;
  for (int k = 0; k < 4; ++k) {
    std::vector<Rat> u(nu, 0);
    for (size_t i = r; i-- > 0;) {
      size_t c = pivot_col[i];
      Rat v = a[i][nu + k];
      for (size_t j = c + 1; j < nu; ++j)
        if (a[i][j] != 0 && u[j] != 0) v -= a[i][j] * u[j];
      u[c] = v / a[i][c];
    }
    std::map<Mono, Rat> check;
    Rat norm = 0;
    for (size_t f = 0; f < forms.size(); ++f)
      for (size_t s = 0; s < shifts.size(); ++s) {
        const Rat& g = u[f * shifts.size() + s];
        if (g == 0) continue;
        if (f < 4) norm += abs(g);
        for (const auto& t : *forms[f]) {
          Mono m;
          for (int l = 0; l < 4; ++l) m[l] = t.e[l] + shifts[s][l];
          check[m] += g * t.c;
        }
      }
    Mono want{0, 0, 0, 0};
    want[k] = 8;
    for (const auto& [m, v] : check)
      if (v != (m == want ? Rat(1) : Rat(0))) throw std::logic_error("archimedean_bounds: ideal identity check failed");
    if (check[want] != 1) throw std::logic_error("archimedean_bounds: ideal identity check failed");
    worst = std::max(worst, norm);
  }
  if (worst <= 0) return std::nullopt;
  return -log(Ball::from_mpq(worst, 128)).upper_d();
}

// Certified tau with E_inf >= tau on the real surface, by interval branch and
// bound over the faces max |x_i| = 1; nullopt once the box budget is spent.
std::optional<double> interval_lower(const KummerForms& kf, long budget, long& boxes) {
  std::array<FormSet, 4> ds;
  for (int i = 0; i < 4; ++i) ds[i] = form_set(kf.delta[i]);
  FormSet qs = form_set(kf.quartic);
  // threshold estimate from sampled real points of the surface (quadratic in k4)
  double tau = sampled_min_e(kf) / 4;
  struct Box {
    std::array<Iv, 4> x;
    int depth;
  };
  for (int attempt = 0; attempt < 8 && tau > 0; ++attempt) {
    bool stuck = false;
    // real points with max |x_i| = 1 lie on a face x_j = 1 up to sign (all forms are even)
    for (int j = 0; j < 4 && !stuck; ++j) {
      std::vector<Box> stack;
      Box b;
      for (int i = 0; i < 4; ++i) b.x[i] = (i == j) ? Iv(1.0) : Iv(-1.0, 1.0);
      b.depth = 0;
      stack.push_back(b);
      while (!stack.empty()) {
        Box cur = stack.back();
        stack.pop_back();
        if (++boxes > budget) return std::nullopt;
        if (!enclose(qs, cur.x).has_zero()) continue;
        double lower = 0;
        for (int i = 0; i < 4; ++i) lower = std::max(lower, enclose(ds[i], cur.x).mig());
        if (lower >= tau) continue;
        if (cur.depth >= 60) {
          stuck = true;
          break;
        }
        int w = -1;
        double wid = -1;
        for (int i = 0; i < 4; ++i) {
          double d = cur.x[i].hi - cur.x[i].lo;
          if (d > wid) {
            wid = d;
            w = i;
          }
        }
        double m = 0.5 * (cur.x[w].lo + cur.x[w].hi);
        Box l = cur, r = cur;
        l.x[w].hi = m;
        r.x[w].lo = m;
        l.depth = r.depth = cur.depth + 1;
        stack.push_back(l);
        stack.push_back(r);
      }
    }
    if (!stuck) return std::log(tau) - 1e-12 * (1 + std::fabs(std::log(tau)));  // rounded down
    tau /= 4;
  }
  return std::nullopt;
}

std::mutex g_arch_mutex;
std::map<std::array<std::string, 6>, ArchBounds> g_arch_cache;

}  // namespace

ArchBounds archimedean_bounds(const Curve& C) {
  std::array<std::string, 6> key;
  for (int i = 0; i < 6; ++i) key[i] = C.a()[i].get_str();
  {
    std::lock_guard<std::mutex> lk(g_arch_mutex);
    auto it = g_arch_cache.find(key);
    if (it != g_arch_cache.end()) return it->second;
  }
  KummerForms kf = kummer_forms(C);
  ArchBounds out{};
  // upper bound: triangle inequality on sup-normalised points
  double up = 0;
  for (int i = 0; i < 4; ++i) {
    Int s = 0;
    for (const auto& t : kf.delta[i]) s += abs(t.c);
    up = std::max(up, s.get_d());
  }
  out.log_upper = std::log(up) * (1 + 1e-15) + 1e-300;

  long boxes = 0;
  std::optional<double> lower = interval_lower(kf, 20000, boxes);
  out.lower_method = "interval";
  if (!lower) {
    lower = ideal_log_lower(kf);
    out.lower_method = "ideal";
  }
  if (!lower) throw PrecisionError("archimedean_bounds: no positive lower bound found");
  out.log_lower = *lower;
  out.boxes = boxes;
  std::lock_guard<std::mutex> lk(g_arch_mutex);
  g_arch_cache[key] = out;
  return out;
}

// ------------------------------------------------------- canonical height

CanonicalHeight canonical_height(const Curve& C, const Divisor& D, double target_radius, long prec) {
  if (!(target_radius > 0)) throw std::domain_error("canonical_height: target radius must be positive");
  KummerForms kf = kummer_forms(C);
  KummerPoint k = normalize(kummer_map(C, D));
  auto x0 = primitive(k);
  CanonicalHeight out;
  out.naive = naive_height(k, prec);

  ArchBounds ab = archimedean_bounds(C);
  double Binf = std::max(std::fabs(ab.log_upper), std::fabs(ab.log_lower));
  std::vector<Int> primes = bad_primes(C);
  double Bfin = 0;
  for (const auto& p : primes) Bfin += drop_bound(C, p) * std::log(p.get_d());
  out.step_bound = std::max(ab.log_upper, 0.0) + std::max(-ab.log_lower, 0.0) + Bfin;

  auto depth_for = [&](double B) {
    int n = 0;
    while (B * std::pow(4.0, -n) / 3 > target_radius / 4 && n < 200) ++n;
    return n;
  };
  int Ninf = depth_for(Binf) + 1;
  int Nfin = depth_for(Bfin) + 1;
  if (Ninf >= 200 || Nfin >= 200) throw PrecisionError("canonical_height: target radius unreachable");
  out.depth_inf = Ninf;
  out.depth_finite = Nfin;

  Ball total = out.naive;
  for (const auto& p : primes) {
    LocalHeightReport r;
    r.place = p.get_str();
    long bound = drop_bound(C, p);
    r.drops = padic_drops(kf, x0, p, Nfin, bound);
    for (long v : r.drops)
      if (v > bound) throw std::logic_error("canonical_height: valuation drop exceeds the Stoll bound");
    Ball lp = log_prime(p, prec);
    Ball sum = -(Ball::from_mpq(weighted_drops(r.drops), prec) * lp);
    Rat tail_q = frac(bound, 3);
    for (int i = 0; i < Nfin; ++i) tail_q /= 4;
    r.tail_bound = Ball::from_mpq(tail_q, prec) * lp;
    Ball half = r.tail_bound.mul_2si(-1);
    r.mu = sum - half;
    r.mu.add_error(half.mid()).add_error(half.rad());
    r.truncation_depth = Nfin;
    r.lambda_naive = Ball(prec);
    r.lambda_canonical = r.mu;
    total = total + r.mu;
    out.finite.push_back(r);
  }

  // archimedean correction: iterate on sup-normalised real balls
  long wp = prec + 64 + 12L * Ninf;
  for (int attempt = 0; attempt < 6; ++attempt, wp *= 2) {
    try {
      auto conv = [wp](const Int& c) { return Ball::from_mpz(c, wp); };
      Int m = 0;
      for (auto& x : x0) m = std::max(m, Int(abs(x)));
      std::array<Ball, 4> y;
      for (int i = 0; i < 4; ++i) y[i] = Ball::from_mpq(frac(x0[i], m), wp);
      Ball mu(wp);
      Ball w = Ball::from_mpq(frac(1, 4), wp);
      for (int n = 0; n < Ninf; ++n) {
        std::array<Ball, 4> d;
        Ball dm(wp), ym(wp);
        for (int i = 0; i < 4; ++i) {
          d[i] = eval_form<Ball>(kf.delta[i], y, conv);
          dm = i == 0 ? abs(d[i]) : max(dm, abs(d[i]));
          ym = i == 0 ? abs(y[i]) : max(ym, abs(y[i]));
        }
        Ball logE = log(dm) - Ball::from_si(4, wp) * log(ym);
        mu = mu + w * logE;
        w = w.mul_2si(-2);
        for (int i = 0; i < 4; ++i) y[i] = d[i] / dm;
      }
      // tail: sum_{n >= N} 4^{-n-1} log E lies in [log_lower, log_upper] * 4^{-N} / 3
      double scale = std::pow(4.0, -Ninf) / 3;
      double lo = std::min(ab.log_lower, 0.0) * scale, hi = std::max(ab.log_upper, 0.0) * scale;
      Ball tail = Ball::from_double((lo + hi) / 2, wp);
      tail.add_error_d((hi - lo) / 2 * (1 + 1e-12));
      mu = mu + tail;
      if (mu.rad_d() > target_radius / 4) continue;
      out.mu_inf = mu.with_prec(prec);
      total = total + out.mu_inf;
      out.value = total;
      if (out.value.rad_d() > target_radius)
        throw PrecisionError("canonical_height: radius " + std::to_string(out.value.rad_d()) +
                             " exceeds target");
      return out;
    } catch (const std::domain_error&) {
      // a ball grew through zero; retry at higher precision
    }
  }
  throw PrecisionError("canonical_height: archimedean iteration did not converge");
}

}  // namespace ah
