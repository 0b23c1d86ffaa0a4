// Genus-2 theta functions with rational characteristics, the archimedean
// local height Lambda, Siegel-domain predicates and the explicit analytic
// lower bounds on Lambda and on the ten even theta constants.
#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "abelheight/ball.hpp"
#include "abelheight/exact.hpp"

namespace ah {

// Symmetric 2x2 period matrix tau = [[t11, t12], [t12, t22]].
struct PeriodMatrix {
  CBall t11, t12, t22;

  // Entries given as (Re t11, Im t11, Re t12, Im t12, Re t22, Im t22).
  static PeriodMatrix from_rationals(const std::array<Rat, 6>& e, long prec = kDefaultPrecision);
  static PeriodMatrix from_doubles(const std::array<double, 6>& e, long prec = kDefaultPrecision);
  // Exact entries at prec + 16 + 8 (|Im t11| + |Im t22|) bits. Theta near the
  // divisor and the theta-constant bounds need about that many bits of tau.
  static PeriodMatrix with_headroom(const std::array<Rat, 6>& e, long prec = kDefaultPrecision);

  const Ball& im1() const { return t11.im; }
  const Ball& im2() const { return t22.im; }
  const Ball& im12() const { return t12.im; }
  Ball trace_im() const { return t11.im + t22.im; }
  Ball det_im() const { return t11.im * t22.im - sqr(t12.im); }
  // Im tau is certainly positive definite.
  bool positive_definite() const;
  // t11 and t22 exchanged.
  PeriodMatrix swapped() const { return PeriodMatrix{t22, t12, t11}; }
};

struct ThetaCharacteristic {
  std::array<Rat, 2> a;
  std::array<Rat, 2> b;
  // (-1)^{4 a.b}; characteristics here have entries in {0, 1/2}.
  int parity() const;
  bool operator==(const ThetaCharacteristic& o) const { return a == o.a && b == o.b; }
  // "[a1,a2,b1,b2]"
  std::string str() const;
};

// The odd characteristic [1/2,1/2,0,1/2] cutting out the theta divisor.
ThetaCharacteristic lambda_characteristic();
// The ten even characteristics: the four with a = 0, then the six others.
std::vector<ThetaCharacteristic> even_characteristics();

// Point Z = X + tau Y of C^2 / (Z^2 + tau Z^2).
struct TorusPoint {
  std::array<Rat, 2> X;
  std::array<Rat, 2> Y;
  // Components moved into [-1/2, 1/2).
  TorusPoint reduced() const;
  // max(|x1|, |x2|, |y1|, |y2|)
  Rat norm() const;
  TorusPoint scaled(const Int& n) const;
  std::array<CBall, 2> z(const PeriodMatrix& tau, long prec) const;
};

struct DivisorProximityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// theta_{a,b}(Z, tau) = sum_n exp(2 pi i (1/2 (n+a)^t tau (n+a) + (n+a)^t (Z+b))).
// The truncation error is at most 2^-prec.
CBall theta(const ThetaCharacteristic& ch, const std::array<CBall, 2>& Z, const PeriodMatrix& tau,
            long prec = kDefaultPrecision);
// Number of layers used for the truncated sum.
int theta_layers(const ThetaCharacteristic& ch, const std::array<CBall, 2>& Z,
                 const PeriodMatrix& tau, long prec);

// Lambda(P) = -log(|theta_{[1/2,1/2,0,1/2]}(Z)| exp(-pi Y^t Im(tau) Y)).
// The working precision is raised until |theta| is resolved; the error is
// thrown once it stays unresolved with max(256, 8 Tr Im tau) extra bits.
Ball big_lambda(const TorusPoint& P, const PeriodMatrix& tau, long prec = kDefaultPrecision);

// delta(a+Y) = min_i d(1/2 + y_i, Z)
Rat delta_a_plus_y(const std::array<Rat, 2>& Y);
// max_i 8 pi (4/pi + 2|y_i| + (sqrt(y_i^2 + 8/pi) + 2)^2 / 2 + 1/2)
Ball c3_constant(const std::array<Rat, 2>& Y, long prec = kDefaultPrecision);
// C2(y) = 4 (4/pi + 2|y| + (sqrt(y^2 + 8/pi) + 2)^2 / 2 + 1/2)
Ball c2_constant(const Rat& y, long prec = kDefaultPrecision);

// pi (Tr Im tau - 2 Im t12) delta(a+Y)^2 - log(4 + 3/2 Tr Im tau) + log(1/||(X,Y)||) - log C3(Y)
// Requires 0 < ||(X,Y)|| <= 1/2.
Ball lambda_lower_bound(const std::array<Rat, 2>& X, const std::array<Rat, 2>& Y,
                        const PeriodMatrix& tau, long prec = kDefaultPrecision);

// Inequalities are reported true only when they hold for every point of the balls.
struct SiegelReport {
  bool s1_checked = false;  // never: infinitely many conditions
  bool s2 = false;          // |Re t_ij| <= 1/2
  bool s3_partial = false;  // Im t22 >= Im t11 >= sqrt(3)/2, Im t_ii/2 >= |Im t12|, Im t12 >= 0
  bool reduced() const { return s2 && s3_partial; }
  bool in_F2_eps = false;   // reduced, Im t12 >= eps > 0, Im t11 >= max(1/eps, 31)
  bool in_F2_inf = false;   // reduced, Im t11 Im t12 >= 1, Im t11 >= 31
  Rat epsilon;
};
SiegelReport siegel_checks(const PeriodMatrix& tau, const Rat& epsilon);

struct TorsionLambdaSum {
  std::vector<TorusPoint> points;  // 80 points, (a1, a2, a3, a4) lexicographic
  std::vector<Ball> values;
  Ball sum;
  // 8 pi Tr Im tau - 8 pi Im t12 + 10 log max(1/eps, 15)
  Ball bound;
  bool holds = false;
};
// Requires Im t12 >= eps > 0, Im t22 >= 31, Im t11 >= max(sqrt(3)/2, 1/eps) and tau reduced.
// Some of the 80 values cancel down to |theta| ~ e^{-pi Tr Im tau / 4}: tau must carry
// about 8 Tr Im tau bits beyond prec, or DivisorProximityError is thrown.
TorsionLambdaSum three_torsion_lambda_sum(const PeriodMatrix& tau, const Rat& epsilon,
                                          long prec = kDefaultPrecision);

struct ThetaConstant {
  ThetaCharacteristic ch;
  CBall value;        // theta_{a,b}(0, tau)
  Ball scaled_abs;    // |theta_{a,b}(0, tau)| exp(pi a^t Im(tau) a)
  std::string bound_name;
  std::optional<Ball> lower_bound;  // absent when the hypotheses fail
  bool holds = true;
};
// Bounds for a = 0 and a in {(1/2,0), (0,1/2)} need tau reduced; those for
// a = (1/2,1/2) additionally need tau in F_{2,inf}. For [1/2,1/2,1/2,1/2] the
// bound is min(eps/2, 0.31) with eps = Im t12. Values and bounds are computed at
// prec + 32 + 5 Im t22 bits so that the comparisons resolve for large Im tau.
std::vector<ThetaConstant> even_theta_constants(const PeriodMatrix& tau,
                                                long prec = kDefaultPrecision);

// Closed-form lower bounds on |theta_{a,b}(0,tau)| exp(pi a^t Im(tau) a).
Ball carac00_bound(const PeriodMatrix& tau, long prec = kDefaultPrecision);
Ball carac1000_bound(const PeriodMatrix& tau, long prec = kDefaultPrecision);
Ball carac1100_bound(const PeriodMatrix& tau, long prec = kDefaultPrecision);

// Enclosures of one-dimensional Gaussian series, excluding the listed n.
//   sum exp(-alpha (n + beta)^2)
Ball gauss_series(const Ball& alpha, const Rat& beta, const std::vector<long>& excluded,
                  long prec = kDefaultPrecision);
//   sum |n + 1/2| exp(-alpha (n + beta)^2)
Ball weighted_gauss_series(const Ball& alpha, const Rat& beta, long prec = kDefaultPrecision);
// Upper bounds for the two series above (beta generic, beta integral, beta = 1/2
// without n in -3..2, beta = 0 without n in -1..1).
Ball gauss_bound(const Ball& alpha, const Rat& beta, long prec = kDefaultPrecision);
Ball gauss_bound_half_tail(const Ball& alpha, long prec = kDefaultPrecision);
Ball gauss_bound_zero_tail(const Ball& alpha, long prec = kDefaultPrecision);
// C(alpha, beta) exp(-alpha d(beta, Z)^2)
Ball weighted_gauss_bound(const Ball& alpha, const Rat& beta, long prec = kDefaultPrecision);

// sum over n in Z^2 of |n_i + 1/2| exp(-pi v^t Im(tau) v), v = n + (1/2,1/2) + u Y.
Ball lattice_weighted_series(const PeriodMatrix& tau, const std::array<Rat, 2>& Y, const Rat& u,
                             int i, long prec = kDefaultPrecision);
// C2(y_i) exp(-pi (Tr Im tau - 2 Im t12) delta(a+Y)^2)
Ball lattice_weighted_bound(const PeriodMatrix& tau, const std::array<Rat, 2>& Y, int i,
                            long prec = kDefaultPrecision);

}  // namespace ah
