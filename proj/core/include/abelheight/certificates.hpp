// Global bounds: height lower bound for Jacobians, torsion and rational-point
// counts, the product-of-elliptic-curves constant, and the pigeonhole search
// for a small multiple near the origin of the torus.
#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "abelheight/ball.hpp"
#include "abelheight/exact.hpp"
#include "abelheight/theta.hpp"

namespace ah {

// coefficient * prod base^exponent, kept symbolic so that huge powers never
// get expanded.
struct PowerFactor {
  Int base;
  Int exponent;
};
struct ExactExpr {
  Rat coefficient = 1;
  std::vector<PowerFactor> factors;
  std::string str() const;
  Ball log10(long prec = kDefaultPrecision) const;
};

struct Hypothesis {
  std::string name;
  bool satisfied = false;
  std::string detail;
};

struct NamedConstant {
  std::string name;
  std::string formula;  // symbolic in d and m
  std::string value;    // instantiated
  std::optional<Ball> log10;
};

enum class BoundKind { height_lower, torsion, rational_points, product_case };
std::string to_string(BoundKind k);

struct BoundCertificate {
  BoundKind kind = BoundKind::height_lower;
  std::vector<Hypothesis> hypotheses;
  std::vector<NamedConstant> constants;
  // Populated only when every hypothesis holds.
  std::optional<Ball> value_log10;   // log10 |value|
  std::optional<ExactExpr> value_exact;
  int sign = 0;                      // sign of the value
  std::string note;
  bool conclusive() const;
};

struct RefusedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// 3^16 d multiplied by k, exactly.
Int exponent_3_16(long k, long d);

// Either [n]P = O for some 1 <= n <= 2 * 240^{4 3^16 d}, or
// h(P) >= c1 (Tr - 63 log N(D)) with c1 = 1/(160 d 240^{8 3^16 d}).
// Refuses products of elliptic curves: their 3-torsion meets the polarization divisor.
BoundCertificate jacobian_lower_bound(long d, double tr_inf, double log_d,
                                      const std::vector<SiegelReport>& siegel_reports,
                                      bool product_of_elliptic_curves = false,
                                      long prec = kDefaultPrecision);

// Optional data used to check the hypotheses of the counting corollaries.
struct CountingInputs {
  std::optional<double> tr_inf;
  std::optional<double> log_d;
  std::vector<SiegelReport> siegel_reports;  // one per archimedean place
};

// |A(k)_tors| <= 2^4 240^{16 3^16 d}
BoundCertificate torsion_bound(long d, const CountingInputs& in = {}, long prec = kDefaultPrecision);
// |C(k)| <= (240^{(d+1) 2^35})^{rank+1}
BoundCertificate rational_points_bound(long d, long rank, const CountingInputs& in = {},
                                       long prec = kDefaultPrecision);
// c0 = (c1 - 7 c2) / (c3 + 7 c4) for E1 x E2.
BoundCertificate product_case_bound(double tr1, double log_disc1, double tr2, double log_disc2,
                                    long d, long m, long prec = kDefaultPrecision);

// (c1 - c2/64)(c3 + c4/64)^-1 / 240^{-8 3^16 d}, next to the rounded 0.00005.
struct Genus2Constant {
  Ball coefficient;
  Rat rounded = frac(5, 100000);
  Int exponent;  // 8 3^16 d
};
Genus2Constant genus2_constant(long d, long prec = kDefaultPrecision);

// Symbolic forms of every printed constant, one "name = formula" per entry.
std::vector<std::pair<std::string, std::string>> constants_manifest();
std::string constants_manifest_text();

struct ZeroLemmaViolation : std::logic_error {
  using std::logic_error::logic_error;
};
// Index (0: P1, 1: P2, 2: P1+P2) of the first point reported off Theta.
int zero_lemma_filter(const std::array<bool, 3>& on_theta);

struct PigeonholeResult {
  long n = 0;
  std::array<long, 3> indices{};     // n1 < n2 < n3 sharing a box
  std::array<long, 3> candidates{};  // n2-n1, n3-n2, n3-n1
  int selected = 0;
};
struct NoCollisionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// orbits[v][n] is the torus point of [n]P at place v for n = 0..2 M^{4m};
// on_theta[n] flags [n]P on Theta.
PigeonholeResult pigeonhole_multiplier(const std::vector<std::vector<TorusPoint>>& orbits, long M,
                                       const std::vector<bool>& on_theta);
// Direct check: ||X_v([n]P)||, ||Y_v([n]P)|| <= 1/M at every place and [n]P off Theta.
bool pigeonhole_conditions(const std::vector<std::vector<TorusPoint>>& orbits, long M,
                           const std::vector<bool>& on_theta, long n);

}  // namespace ah
