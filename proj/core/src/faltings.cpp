#include "abelheight/faltings.hpp"

#include <algorithm>
#include <cmath>

namespace ah {

namespace {

Ball B(long v, long p) { return Ball::from_si(v, p); }
Ball B(const Rat& q, long p) { return Ball::from_mpq(q, p); }
Ball D(double x, long p) { return Ball::from_double(x, p); }

void add_abs_error(CBall& z, const Ball& e) {
  mpfr_t t;
  mpfr_init2(t, 64);
  e.upper(t);
  z.re.add_error(t);
  z.im.add_error(t);
  mpfr_clear(t);
}

}  // namespace

Ball faltings_arch_term(const PeriodMatrix& tau, long prec) {
  // theta constants with a = (1/2,1/2) are about e^{-pi (t1 + t2 + 2 t12) / 4}
  double tr = std::max(tau.trace_im().upper_d(), 0.0);
  long wp = prec + 16 + static_cast<long>(std::ceil(3 * tr));
  std::array<CBall, 2> zero{CBall(wp), CBall(wp)};
  Ball s(wp);
  for (const auto& ch : even_characteristics()) {
    Ball a2 = abs2(theta(ch, zero, tau, wp));
    if (!a2.is_positive())
      throw DegenerateThetaError("faltings_arch_term: theta constant " + ch.str() +
                                 " may vanish (product of elliptic curves locus)");
    s += log(a2);
  }
  // -log(2^-12 prod |theta|^2) = 12 log 2 - sum log |theta|^2
  return B(12, wp) * Ball::log2(wp) - s;
}

Ball faltings_arch_term_full(const PeriodMatrix& tau, long prec) {
  return faltings_arch_term(tau, prec) - B(5, prec) * log(tau.det_im());
}

Ball faltings_arch_majorant(const PeriodMatrix& tau, long prec) {
  Ball C = B(1, prec);
  for (const auto& c : even_theta_constants(tau, prec)) {
    if (!c.lower_bound) throw std::domain_error("faltings_arch_majorant: tau not in F_{2,inf}");
    C *= *c.lower_bound;
  }
  if (!C.is_positive()) throw std::domain_error("faltings_arch_majorant: nonpositive theta bound");
  Ball two_pi = B(2, prec) * Ball::pi(prec);
  return two_pi * (tau.im1() + tau.im2() + tau.im12()) + B(12, prec) * Ball::log2(prec) -
         B(2, prec) * log(C);
}

Ball c_theta_floor(const Rat& epsilon, long prec) {
  Rat m = std::min(Rat(epsilon / 2), frac(31, 100));
  return B(frac(92, 100) * m * m, prec);
}

FaltingsReport faltings_upper_bound(double tr_inf, double log_d, long d, long prec) {
  if (d < 1) throw std::domain_error("faltings_upper_bound: d must be positive");
  if (tr_inf < 0 || log_d < 0) throw std::domain_error("faltings_upper_bound: negative input");
  FaltingsReport r;
  Ball pi = Ball::pi(prec);
  r.c3 = (B(5, prec) * pi + B(2, prec)) / B(20 * d, prec);
  r.c4 = B(frac(1, 10 * d), prec);
  r.c3_formula = "(5*pi+2)/(20*d)";
  r.c4_formula = "1/(10*d)";
  r.arch_term = r.c3 * D(tr_inf, prec);
  r.finite_term_upper = r.c4 * D(log_d, prec);
  r.h_prime_upper = r.arch_term + r.finite_term_upper;
  return r;
}

EllipticDelta elliptic_delta(const CBall& tau, long prec) {
  long wp = prec + 32;
  if (!sqr(tau.im).certainly_ge(B(frac(3, 4), wp)) || !tau.im.is_positive())
    throw std::domain_error("elliptic_delta: Im tau < sqrt(3)/2");
  Ball pi = Ball::pi(wp), one = B(1, wp);
  Ball two_pi = B(2, wp) * pi;
  CBall q = exp(CBall(-(two_pi * tau.im), two_pi * tau.re));
  Ball aq = exp(-(two_pi * tau.im));  // |q|
  double lq = -2 * M_PI * tau.im.lower_d();
  int N = std::max(1, static_cast<int>(std::ceil((wp + 8) * std::log(2.0) / -lq)));
  CBall P = CBall::from_si(1, wp), qn = q;
  for (int n = 1; n <= N; ++n) {
    P *= CBall::from_si(1, wp) - qn;
    qn *= q;
  }
  // |log prod_{n>N} (1 - q^n)| <= eta
  Ball qN1 = pow_ui(aq, N + 1);
  Ball eta = qN1 / ((one - aq) * (one - qN1));
  Ball rel = exp(B(24, wp) * eta) - one;
  EllipticDelta out;
  out.terms = N;
  CBall d = q * pow_ui(P, 24) * CBall(inv(pow_ui(two_pi, 12)));
  add_abs_error(d, abs(d) * rel);
  out.delta = d;
  Ball e = exp(-(two_pi * tau.im));
  out.A_bound = B(24, wp) * e / (one - e);
  Ball a2 = abs2(d);
  if (!a2.is_positive()) throw std::domain_error("elliptic_delta: Delta ball contains 0");
  out.neg_log_abs = -(B(frac(1, 2), wp) * log(a2));
  return out;
}

Ball elliptic_faltings_upper(double tr, double log_norm_disc, long d, long prec) {
  if (d < 1) throw std::domain_error("elliptic_faltings_upper: d must be positive");
  if (tr < 0 || log_norm_disc < 0) throw std::domain_error("elliptic_faltings_upper: negative input");
  return B(frac(32, 12 * d), prec) * D(tr, prec) + B(frac(1, 12 * d), prec) * D(log_norm_disc, prec);
}

Ball elliptic_height_lower(double tr, double log_norm_disc, long d, long m, long prec) {
  if (d < 1 || m < 1) throw std::domain_error("elliptic_height_lower: d, m must be positive");
  Int den = Int(d) * 10;
  Int p20;
  mpz_ui_pow_ui(p20.get_mpz_t(), 20, static_cast<unsigned long>(4 * m));
  Ball c1 = B(frac(Int(3), den * p20), prec);
  return c1 * (D(tr, prec) - D(log_norm_disc, prec) / B(frac(36, 5), prec));
}

}  // namespace ah
