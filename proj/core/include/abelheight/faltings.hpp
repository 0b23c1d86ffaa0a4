// Upper bounds for the augmented Faltings height of genus-2 Jacobians and of
// elliptic curves, and the elliptic Neron-Tate lower bound.
#pragma once

#include <stdexcept>
#include <string>

#include "abelheight/ball.hpp"
#include "abelheight/theta.hpp"

namespace ah {

struct DegenerateThetaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// -log|2^-12 prod_m theta_m(0, tau)^2| over the ten even characteristics.
// Throws DegenerateThetaError when a theta constant may vanish.
Ball faltings_arch_term(const PeriodMatrix& tau, long prec = kDefaultPrecision);
// The same term with the det(Im tau)^5 factor inside the logarithm.
Ball faltings_arch_term_full(const PeriodMatrix& tau, long prec = kDefaultPrecision);

// 2 pi (Im t1 + Im t2 + Im t12) + 12 log 2 - 2 log C, with C the product of the
// ten theta-constant lower bounds (requires tau in F_{2,inf}).
Ball faltings_arch_majorant(const PeriodMatrix& tau, long prec = kDefaultPrecision);
// 0.92 min(eps/2, 0.31)^2
Ball c_theta_floor(const Rat& epsilon, long prec = kDefaultPrecision);

struct FaltingsReport {
  Ball c3;                 // (5 pi + 2) / (20 d)
  Ball c4;                 // 1 / (10 d)
  std::string c3_formula;  // "(5*pi+2)/(20*d)"
  std::string c4_formula;  // "1/(10*d)"
  Ball arch_term;          // c3 * Tr
  Ball finite_term_upper;  // c4 * log N(D)
  Ball h_prime_upper;
};
FaltingsReport faltings_upper_bound(double tr_inf, double log_d, long d,
                                    long prec = kDefaultPrecision);

struct EllipticDelta {
  CBall delta;      // q / (2 pi)^12 prod (1 - q^n)^24
  Ball A_bound;     // 24 e^{-2 pi Im tau} / (1 - e^{-2 pi Im tau})
  Ball neg_log_abs; // -log|delta|
  int terms = 0;
};
// Requires Im tau >= sqrt(3)/2.
EllipticDelta elliptic_delta(const CBall& tau, long prec = kDefaultPrecision);

// (32 / (12 d)) Tr + (1 / (12 d)) log N(Delta)
Ball elliptic_faltings_upper(double tr, double log_norm_disc, long d, long prec = kDefaultPrecision);
// (0.3 / (d 20^{4m})) (Tr - log N(Delta) / 7.2)
Ball elliptic_height_lower(double tr, double log_norm_disc, long d, long m,
                           long prec = kDefaultPrecision);

}  // namespace ah
