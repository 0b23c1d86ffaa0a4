// Kummer surface of a genus-2 Jacobian: the map kappa, duplication forms,
// naive and canonical heights, and local heights at finite places.
#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "abelheight/ball.hpp"
#include "abelheight/jacobian.hpp"

namespace ah {

using KummerPoint = std::array<Rat, 4>;

// One monomial of a form in k1..k4 with integer coefficient.
struct KTerm {
  std::array<int, 4> e;
  Int c;
};
using KForm = std::vector<KTerm>;

// Generic duplication data: delta_i as polynomials in k1..k4 and a0..a5.
struct DupTerm {
  int index;  // 1..4
  std::array<int, 4> e;
  std::array<int, 6> m;
  Int c;
};

// Parsed form of the shipped data file (see core/data/duplication.txt).
const std::vector<DupTerm>& duplication_table();
std::vector<DupTerm> parse_duplication_table(const std::string& text);
const std::string& duplication_table_text();

// Forms specialised to a curve.
struct KummerForms {
  std::array<KForm, 4> delta;
  KForm quartic;  // K2 k4^2 + K1 k4 + K0
};

KummerForms kummer_forms(const Curve& C);

// conv maps an integer coefficient into T.
template <class T, class Conv>
T eval_form(const KForm& f, const std::array<T, 4>& k, Conv conv) {
  T one = conv(Int(1));
  std::array<std::array<T, 5>, 4> pw;
  for (int i = 0; i < 4; ++i) {
    pw[i][0] = one;
    for (int j = 1; j <= 4; ++j) pw[i][j] = pw[i][j - 1] * k[i];
  }
  T s = conv(Int(0));
  for (const auto& t : f) {
    T m = pw[0][t.e[0]] * pw[1][t.e[1]];
    m = m * pw[2][t.e[2]];
    m = m * pw[3][t.e[3]];
    s = s + m * conv(t.c);
  }
  return s;
}

Rat eval_form(const KForm& f, const KummerPoint& k);
Int eval_form(const KForm& f, const std::array<Int, 4>& k);

// First nonzero coordinate set to 1; throws on the zero tuple.
KummerPoint normalize(const KummerPoint& k);
// Coprime integer representative with positive first nonzero coordinate.
std::array<Int, 4> primitive(const KummerPoint& k);

KummerPoint kummer_map(const Curve& C, const Divisor& D);
Rat kummer_quartic(const Curve& C, const KummerPoint& k);

struct Duplicated {
  KummerPoint point;
  Rat delta1;
};
Duplicated duplicate(const Curve& C, const KummerPoint& k);

Ball naive_height(const KummerPoint& k, long prec = kDefaultPrecision);

struct LocalHeightReport {
  std::string place;  // decimal prime or "archimedean"
  Ball lambda_naive;
  Ball mu;
  Ball lambda_canonical;
  int truncation_depth = 0;
  Ball tail_bound;
  // valuations v_p(gcd delta(x_n)) observed along the orbit (finite places)
  std::vector<long> drops;
};

// Local height at a prime p of a divisor off Theta.
LocalHeightReport local_lambda_finite(const Curve& C, const Divisor& D, const Int& p, int depth,
                                      long prec = kDefaultPrecision);

// E_p(K) = max|delta_i(K)|_p / max|k_i|_p^4 on a coprime integral representative, as p^-v.
long stoll_drop(const Curve& C, const KummerPoint& k, const Int& p);

// Rigorous bounds on log E_inf over the real points of the Kummer surface.
struct ArchBounds {
  double log_upper;  // log max_i (sum of |coefficients| of delta_i)
  double log_lower;  // certified lower bound on log E_inf
  long boxes = 0;
  // "interval": branch and bound on the real surface; "ideal": from
  // k_i^8 = sum_j g_ij delta_j + h_i K when the box budget runs out
  std::string lower_method;
};
ArchBounds archimedean_bounds(const Curve& C);

struct CanonicalHeight {
  Ball value;
  Ball naive;
  Ball mu_inf;
  std::vector<LocalHeightReport> finite;  // bad primes
  int depth_inf = 0;
  int depth_finite = 0;
  double step_bound = 0;  // B(C): bound on |h(2Q) - 4h(Q)|
};

// Canonical height to the requested radius; throws PrecisionError if unreachable.
CanonicalHeight canonical_height(const Curve& C, const Divisor& D, double target_radius = 1e-10,
                                 long prec = kDefaultPrecision);

struct PrecisionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Primes dividing 2 * a5 * disc(F).
std::vector<Int> bad_primes(const Curve& C);

}  // namespace ah
