#include "abelheight/theta.hpp"

#include <algorithm>
#include <cmath>

namespace ah {

namespace {

Ball B(const Rat& q, long p) { return Ball::from_mpq(q, p); }
Ball B(long v, long p) { return Ball::from_si(v, p); }

Rat rat_of(double x) {
  Rat r;
  mpq_set_d(r.get_mpq_t(), x);
  return r;
}

Rat floor_rat(const Rat& x) {
  Int f;
  mpz_fdiv_q(f.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return Rat(f);
}

Rat dist_to_Z(const Rat& x) {
  Rat f = x - floor_rat(x);
  return std::min(f, Rat(Rat(1) - f));
}

Rat rabs(const Rat& x) { return x < 0 ? Rat(-x) : x; }

// |x| <= bound for every point of the ball
bool certainly_abs_le(const Ball& x, const Rat& bound) {
  return abs(x).certainly_le(Ball::from_mpq(bound, x.prec()));
}

// Lower bound on the smallest eigenvalue of Im tau, or 0 if none is found.
double min_eig_lower(const PeriodMatrix& tau) {
  long p = tau.t11.prec();
  Ball t1 = tau.im1(), t2 = tau.im2(), t12 = abs(tau.im12());
  Ball diag = min(t1, t2) - t12;
  Ball half = B(frac(1, 2), p);
  Ball eig = (t1 + t2) * half - sqrt_nonneg(sqr((t1 - t2) * half) + sqr(t12));
  double lo = std::max(diag.lower_d(), eig.lower_d());
  return lo > 0 ? std::nextafter(lo, 0.0) : 0.0;
}

double upper_norm2(const Ball& a, const Ball& b) {
  double x = std::fabs(a.mid_d()) + a.rad_d();
  double y = std::fabs(b.mid_d()) + b.rad_d();
  double s = std::sqrt(x * x + y * y);
  return std::nextafter(s * (1 + 1e-12), INFINITY);
}

// Rigorous bound on the theta tail over shells k >= N+1.
Ball theta_tail(double lam, int N, long p) {
  Ball c = Ball::pi(p) * Ball::from_double(lam, p) * B(frac(1, 2), p);
  Ball r = B(frac(2 * N + 1, 2), p);
  Ball rho = B(2, p) * exp(-(B(2, p) * c * B(N + 1, p)));
  Ball one = B(1, p);
  if (!rho.certainly_lt(one)) return Ball::from_double(INFINITY, p);
  return B(8 * (N + 1), p) * exp(-(c * sqr(r))) / (one - rho);
}

struct ThetaPlan {
  int N;
  double lam;
};

ThetaPlan plan(const std::array<CBall, 2>& Z, const PeriodMatrix& tau, long prec) {
  double lam = min_eig_lower(tau);
  if (!(lam > 0)) throw std::domain_error("theta: Im tau is not positive definite");
  double s = upper_norm2(Z[0].im, Z[1].im);
  int N = std::max(1, static_cast<int>(std::ceil(4 * s / lam)));
  double c = M_PI * lam / 2;
  double target = -(static_cast<double>(prec) + 4) * std::log(2.0);
  for (;; ++N) {
    double rho = 2 * std::exp(-2 * c * (N + 1));
    if (rho >= 0.5) continue;
    double lt = std::log(8.0 * (N + 1)) - c * (N + 0.5) * (N + 0.5) - std::log1p(-rho);
    if (lt < target) break;
    if (N > 100000) throw std::domain_error("theta: Im tau too small for evaluation");
  }
  return {N, lam};
}

void check_char(const ThetaCharacteristic& ch) {
  for (int i = 0; i < 2; ++i)
    if (rabs(ch.a[i]) > frac(1, 2)) throw std::domain_error("theta: |a_i| must be at most 1/2");
}

// tY^t Im(tau) Y
Ball quad_im(const PeriodMatrix& tau, const std::array<Rat, 2>& Y, long p) {
  Ball y1 = B(Y[0], p), y2 = B(Y[1], p);
  return sqr(y1) * tau.im1() + B(2, p) * y1 * y2 * tau.im12() + sqr(y2) * tau.im2();
}

Ball a_quad(const PeriodMatrix& tau, const std::array<Rat, 2>& a, long p) {
  return quad_im(tau, a, p);
}

}  // namespace

PeriodMatrix PeriodMatrix::from_rationals(const std::array<Rat, 6>& e, long prec) {
  return PeriodMatrix{CBall(B(e[0], prec), B(e[1], prec)), CBall(B(e[2], prec), B(e[3], prec)),
                      CBall(B(e[4], prec), B(e[5], prec))};
}

PeriodMatrix PeriodMatrix::with_headroom(const std::array<Rat, 6>& e, long prec) {
  double tr = std::fabs(e[1].get_d()) + std::fabs(e[5].get_d());
  return from_rationals(e, prec + 16 + static_cast<long>(std::ceil(8 * tr)));
}

PeriodMatrix PeriodMatrix::from_doubles(const std::array<double, 6>& e, long prec) {
  std::array<Rat, 6> r;
  for (int i = 0; i < 6; ++i) r[i] = rat_of(e[i]);
  return from_rationals(r, prec);
}

bool PeriodMatrix::positive_definite() const { return im1().is_positive() && det_im().is_positive(); }

int ThetaCharacteristic::parity() const {
  Rat s = 4 * (a[0] * b[0] + a[1] * b[1]);
  if (s.get_den() != 1) throw std::domain_error("parity: characteristic not half-integral");
  return mpz_odd_p(s.get_num_mpz_t()) ? -1 : 1;
}

std::string ThetaCharacteristic::str() const {
  return "[" + a[0].get_str() + "," + a[1].get_str() + "," + b[0].get_str() + "," +
         b[1].get_str() + "]";
}

ThetaCharacteristic lambda_characteristic() {
  Rat h(1, 2);
  return ThetaCharacteristic{{h, h}, {0, h}};
}

std::vector<ThetaCharacteristic> even_characteristics() {
  Rat h(1, 2), z(0);
  return {
      {{z, z}, {z, z}}, {{z, z}, {z, h}}, {{z, z}, {h, z}}, {{z, z}, {h, h}},
      {{h, z}, {z, z}}, {{z, h}, {z, z}}, {{h, h}, {z, z}}, {{z, h}, {h, z}},
      {{h, z}, {z, h}}, {{h, h}, {h, h}},
  };
}

TorusPoint TorusPoint::reduced() const {
  TorusPoint r;
  for (int i = 0; i < 2; ++i) {
    r.X[i] = X[i] - floor_rat(X[i] + frac(1, 2));
    r.Y[i] = Y[i] - floor_rat(Y[i] + frac(1, 2));
  }
  return r;
}

Rat TorusPoint::norm() const {
  return std::max({rabs(X[0]), rabs(X[1]), rabs(Y[0]), rabs(Y[1])});
}

TorusPoint TorusPoint::scaled(const Int& n) const {
  Rat q(n);
  return TorusPoint{{X[0] * q, X[1] * q}, {Y[0] * q, Y[1] * q}};
}

std::array<CBall, 2> TorusPoint::z(const PeriodMatrix& tau, long p) const {
  CBall y1(B(Y[0], p)), y2(B(Y[1], p));
  return {CBall(B(X[0], p)) + tau.t11 * y1 + tau.t12 * y2,
          CBall(B(X[1], p)) + tau.t12 * y1 + tau.t22 * y2};
}

int theta_layers(const ThetaCharacteristic& ch, const std::array<CBall, 2>& Z,
                 const PeriodMatrix& tau, long prec) {
  check_char(ch);
  return plan(Z, tau, prec).N;
}

CBall theta(const ThetaCharacteristic& ch, const std::array<CBall, 2>& Z, const PeriodMatrix& tau,
            long prec) {
  check_char(ch);
  if (!tau.positive_definite()) throw std::domain_error("theta: Im tau is not positive definite");
  ThetaPlan pl = plan(Z, tau, prec);
  int N = pl.N;
  long wp = prec + 24 + 2 * static_cast<long>(std::log2(2.0 * N + 1));
  Ball pi = Ball::pi(wp);
  CBall W1 = Z[0] + CBall(B(ch.b[0], wp)), W2 = Z[1] + CBall(B(ch.b[1], wp));
  CBall two = CBall::from_si(2, wp);
  CBall s(wp);
  for (int n1 = -N; n1 <= N; ++n1) {
    CBall m1(B(Rat(n1) + ch.a[0], wp));
    CBall row1 = tau.t11 * sqr(m1) + two * m1 * W1;
    CBall cross = two * tau.t12 * m1;
    for (int n2 = -N; n2 <= N; ++n2) {
      CBall m2(B(Rat(n2) + ch.a[1], wp));
      CBall Q = row1 + (cross + tau.t22 * m2) * m2 + two * m2 * W2;
      s += exp(CBall(-(pi * Q.im), pi * Q.re));
    }
  }
  Ball tail = theta_tail(pl.lam, N, wp);
  mpfr_t t;
  mpfr_init2(t, 64);
  tail.upper(t);
  s.re.add_error(t);
  s.im.add_error(t);
  mpfr_clear(t);
  return s;
}

Ball big_lambda(const TorusPoint& P, const PeriodMatrix& tau, long prec) {
  // |theta| may sit far below 2^-prec; raise the working precision until it is resolved.
  long cap = std::max(256L, static_cast<long>(std::ceil(8 * tau.trace_im().upper_d())));
  for (long extra = 16;; extra *= 4) {
    long wp = prec + extra;
    CBall th = theta(lambda_characteristic(), P.z(tau, wp), tau, wp);
    Ball a2 = abs2(th);
    if (a2.is_positive()) {
      Ball half = B(frac(1, 2), wp);
      return -(half * log(a2)) + Ball::pi(wp) * quad_im(tau, P.Y, wp);
    }
    if (extra >= cap)
      throw DivisorProximityError("big_lambda: point too close to the theta divisor");
  }
}

Rat delta_a_plus_y(const std::array<Rat, 2>& Y) {
  return std::min(dist_to_Z(frac(1, 2) + Y[0]), dist_to_Z(frac(1, 2) + Y[1]));
}

Ball c2_constant(const Rat& y, long p) {
  Ball pi = Ball::pi(p);
  Ball ya = B(rabs(y), p);
  Ball inner = sqrt(sqr(ya) + B(8, p) / pi) + B(2, p);
  Ball half = B(frac(1, 2), p);
  return B(4, p) * (B(4, p) / pi + B(2, p) * ya + half * sqr(inner) + half);
}

Ball c3_constant(const std::array<Rat, 2>& Y, long p) {
  Ball pi = Ball::pi(p);
  Ball two_pi = B(2, p) * pi;
  return max(two_pi * c2_constant(Y[0], p), two_pi * c2_constant(Y[1], p));
}

Ball lambda_lower_bound(const std::array<Rat, 2>& X, const std::array<Rat, 2>& Y,
                        const PeriodMatrix& tau, long p) {
  Rat nrm = TorusPoint{X, Y}.norm();
  if (nrm > frac(1, 2)) throw std::domain_error("lambda_lower_bound: ||(X,Y)|| > 1/2");
  if (nrm == 0) throw std::domain_error("lambda_lower_bound: (X,Y) = 0");
  Ball pi = Ball::pi(p);
  Ball tr = tau.trace_im();
  Rat d = delta_a_plus_y(Y);
  Ball main = pi * (tr - B(2, p) * tau.im12()) * B(d * d, p);
  Ball lg = log(B(4, p) + B(frac(3, 2), p) * tr);
  return main - lg - log(B(nrm, p)) - log(c3_constant(Y, p));
}

SiegelReport siegel_checks(const PeriodMatrix& tau, const Rat& epsilon) {
  SiegelReport r;
  r.epsilon = epsilon;
  long p = tau.t11.prec();
  Rat h(1, 2);
  r.s2 = certainly_abs_le(tau.t11.re, h) && certainly_abs_le(tau.t12.re, h) &&
         certainly_abs_le(tau.t22.re, h);
  Ball t1 = tau.im1(), t2 = tau.im2(), t12 = tau.im12();
  Ball zero(p), half = B(h, p);
  bool order = t1.certainly_le(t2) && t1.is_positive() &&
               sqr(t1).certainly_ge(B(frac(3, 4), p));
  bool offdiag = abs(t12).certainly_le(half * t1) && abs(t12).certainly_le(half * t2);
  bool nonneg = zero.certainly_le(t12);
  r.s3_partial = order && offdiag && nonneg;
  Ball b31 = B(31, p);
  bool big1 = t1.certainly_ge(b31);
  if (epsilon > 0) {
    r.in_F2_eps = r.reduced() && t12.certainly_ge(B(epsilon, p)) && big1 &&
                  t1.certainly_ge(B(1 / epsilon, p));
  }
  r.in_F2_inf = r.reduced() && big1 && (t1 * t12).certainly_ge(B(1, p));
  return r;
}

TorsionLambdaSum three_torsion_lambda_sum(const PeriodMatrix& tau, const Rat& epsilon, long prec) {
  long p = prec;
  SiegelReport rep = siegel_checks(tau, epsilon);
  if (!(epsilon > 0)) throw std::domain_error("three_torsion_lambda_sum: epsilon must be positive");
  Ball t1 = tau.im1();
  bool hyp = rep.reduced() && tau.im12().certainly_ge(B(epsilon, p)) &&
             tau.im2().certainly_ge(B(31, p)) && t1.certainly_ge(B(1 / epsilon, p)) &&
             sqr(t1).certainly_ge(B(frac(3, 4), p)) && t1.is_positive();
  if (!hyp) throw std::domain_error("three_torsion_lambda_sum: hypotheses on tau not satisfied");
  TorsionLambdaSum out;
  out.sum = Ball(p);
  for (int a1 = 0; a1 < 3; ++a1)
    for (int a2 = 0; a2 < 3; ++a2)
      for (int a3 = 0; a3 < 3; ++a3)
        for (int a4 = 0; a4 < 3; ++a4) {
          if (a1 == 0 && a2 == 0 && a3 == 0 && a4 == 0) continue;
          TorusPoint P{{frac(a1, 3), frac(a2, 3)}, {frac(a3, 3), frac(a4, 3)}};
          Ball v = big_lambda(P, tau, p);
          out.points.push_back(P);
          out.sum += v;
          out.values.push_back(std::move(v));
        }
  Ball pi = Ball::pi(p);
  Rat m = std::max(Rat(1 / epsilon), Rat(15));
  out.bound = B(8, p) * pi * tau.trace_im() - B(8, p) * pi * tau.im12() + B(10, p) * log(B(m, p));
  out.holds = out.sum.certainly_le(out.bound);
  return out;
}

Ball carac00_bound(const PeriodMatrix& tau, long p) {
  Ball pi = Ball::pi(p), one = B(1, p), two = B(2, p), s2 = sqrt(two);
  auto f = [&](const Ball& t) {
    return one + (two + s2 / sqrt(t)) * exp(-(pi * t / two));
  };
  return two - f(tau.im1()) * f(tau.im2());
}

Ball carac1000_bound(const PeriodMatrix& tau, long p) {
  Ball pi = Ball::pi(p), one = B(1, p), two = B(2, p);
  Ball t1 = tau.im1(), t2 = tau.im2();
  Ball s2 = sqrt(two), s6 = sqrt(B(6, p));
  Ball r1 = sqrt(t1), r2 = sqrt(t2);
  Ball f1 = one + (one + s6 / r1) * exp(-(pi * t1 / B(6, p)));
  Ball f2 = two + (one + two / r2) * exp(-(pi * t2 / B(4, p)));
  Ball g = one + (two + s2 / r2) * exp(-(pi * t2 / two));
  Ball h = (one + (one + s2 / r2) * exp(-(pi * t2 / two))) * exp(-(two * pi * t1));
  return B(4, p) - f1 * f2 - g - exp(-(pi * t2)) - h;
}

Ball carac1100_bound(const PeriodMatrix& tau, long p) {
  Ball pi = Ball::pi(p), one = B(1, p), two = B(2, p);
  Ball t1 = tau.im1();
  Ball r1 = sqrt(t1);
  Ball k = B(18, p) + B(6, p) * sqrt(two) / r1 + sqr(one + sqrt(B(8, p)) / r1);
  return two * exp(pi * tau.im12()) - one - k * exp(-(pi * t1 / B(4, p)));
}

std::vector<ThetaConstant> even_theta_constants(const PeriodMatrix& tau, long prec_in) {
  SiegelReport rep = siegel_checks(tau, Rat(0));
  // The scaling by exp(pi a^t Im tau a) and the e^{-pi t/2} gaps of the bounds
  // each cost about 4.6 Im t22 bits.
  double t2 = std::max({tau.im1().upper_d(), tau.im2().upper_d(), 0.0});
  long prec = prec_in + 32 + static_cast<long>(std::ceil(5 * t2));
  std::vector<ThetaConstant> out;
  std::array<CBall, 2> zero{CBall(prec), CBall(prec)};
  Rat h(1, 2), z(0);
  for (const auto& ch : even_characteristics()) {
    ThetaConstant c;
    c.ch = ch;
    c.value = theta(ch, zero, tau, prec);
    c.scaled_abs = abs(c.value) * exp(Ball::pi(prec) * a_quad(tau, ch.a, prec));
    if (ch.a[0] == z && ch.a[1] == z) {
      c.bound_name = "carac00";
      if (rep.reduced()) c.lower_bound = carac00_bound(tau, prec);
    } else if (ch.a[0] == h && ch.a[1] == z) {
      c.bound_name = "carac1000";
      if (rep.reduced()) c.lower_bound = carac1000_bound(tau, prec);
    } else if (ch.a[0] == z && ch.a[1] == h) {
      c.bound_name = "carac1000 (t1 <-> t2)";
      if (rep.reduced()) c.lower_bound = carac1000_bound(tau.swapped(), prec);
    } else if (ch.b[0] == z) {
      c.bound_name = "carac1100";
      if (rep.in_F2_inf) c.lower_bound = carac1100_bound(tau, prec);
    } else {
      // eps = Im t12 is the largest eps with tau in F_{2,eps}
      c.bound_name = "carac1100 min(eps/2, 0.31)";
      if (rep.in_F2_inf)
        c.lower_bound = min(tau.im12() * B(frac(1, 2), prec), B(frac(31, 100), prec));
    }
    c.holds = !c.lower_bound || c.scaled_abs.certainly_ge(*c.lower_bound);
    out.push_back(std::move(c));
  }
  return out;
}

namespace {

int series_half_width(const Ball& alpha, long prec) {
  double a = alpha.lower_d();
  if (!(a > 0)) throw std::domain_error("series: alpha must be positive");
  double k = std::ceil(std::sqrt((prec + 16) * std::log(2.0) / a)) + 2;
  if (k > 1e6) throw std::domain_error("series: alpha too small");
  return static_cast<int>(k);
}

}  // namespace

Ball gauss_series(const Ball& alpha, const Rat& beta, const std::vector<long>& excluded, long prec) {
  long p = prec + 16;
  int K = series_half_width(alpha, prec);
  Rat c = -beta;
  long lo = floor_rat(c).get_num().get_si() - K;
  long hi = lo + 2 * K + 1;
  Ball s(p);
  for (long n = lo; n <= hi; ++n) {
    if (std::find(excluded.begin(), excluded.end(), n) != excluded.end()) continue;
    s += exp(-(alpha * sqr(B(Rat(n) + beta, p))));
  }
  // |n + beta| >= K + 1 =: r outside [lo, hi] on both sides.
  Ball r = B(K + 1, p), one = B(1, p);
  Ball side = exp(-(alpha * sqr(r))) / (one - exp(-(B(2, p) * alpha * r)));
  mpfr_t t;
  mpfr_init2(t, 64);
  (B(2, p) * side).upper(t);
  s.add_error(t);
  mpfr_clear(t);
  return s;
}

Ball weighted_gauss_series(const Ball& alpha, const Rat& beta, long prec) {
  long p = prec + 16;
  int K = series_half_width(alpha, prec);
  long lo = floor_rat(-beta).get_num().get_si() - K;
  long hi = lo + 2 * K + 1;
  Ball s(p);
  for (long n = lo; n <= hi; ++n)
    s += B(rabs(Rat(n) + frac(1, 2)), p) * exp(-(alpha * sqr(B(Rat(n) + beta, p))));
  Ball r = B(K + 1, p), one = B(1, p);
  Ball c = B(rabs(beta - frac(1, 2)), p);
  Ball rho = (one + one / (r + c)) * exp(-(alpha * (B(2, p) * r + one)));
  if (!rho.certainly_lt(one)) throw std::domain_error("weighted_gauss_series: tail does not converge");
  Ball side = (r + c) * exp(-(alpha * sqr(r))) / (one - rho);
  mpfr_t t;
  mpfr_init2(t, 64);
  (B(2, p) * side).upper(t);
  s.add_error(t);
  mpfr_clear(t);
  return s;
}

Ball gauss_bound(const Ball& alpha, const Rat& beta, long p) {
  Ball k = sqrt(Ball::pi(p)) / sqrt(alpha);
  Rat d = dist_to_Z(beta);
  if (d == 0) return B(1, p) + k;
  return (B(2, p) + k) * exp(-(alpha * B(d * d, p)));
}

Ball gauss_bound_half_tail(const Ball& alpha, long p) {
  return sqrt(Ball::pi(p)) / sqrt(alpha) * exp(-(alpha * B(frac(25, 4), p)));
}

Ball gauss_bound_zero_tail(const Ball& alpha, long p) {
  return sqrt(Ball::pi(p)) / sqrt(alpha) * exp(-alpha);
}

Ball weighted_gauss_bound(const Ball& alpha, const Rat& beta, long p) {
  Ball one = B(1, p), half = B(frac(1, 2), p);
  Rat e = beta - frac(1, 2);
  Ball C = one / alpha + B(rabs(e), p) * sqrt(Ball::pi(p)) / sqrt(alpha) +
           half * sqr(sqrt(B(e * e, p) + B(2, p) / alpha) + B(2, p)) + half;
  Rat d = dist_to_Z(beta);
  return C * exp(-(alpha * B(d * d, p)));
}

Ball lattice_weighted_series(const PeriodMatrix& tau, const std::array<Rat, 2>& Y, const Rat& u,
                             int i, long prec) {
  if (i != 1 && i != 2) throw std::domain_error("lattice_weighted_series: i must be 1 or 2");
  if (rabs(Y[0]) > frac(1, 2) || rabs(Y[1]) > frac(1, 2) || u < 0 || u > 1)
    throw std::domain_error("lattice_weighted_series: need |y_i| <= 1/2 and u in [0,1]");
  double lam = min_eig_lower(tau);
  if (!(lam > 0)) throw std::domain_error("lattice_weighted_series: Im tau not positive definite");
  long p = prec + 16;
  // f(x) = (x+1) exp(-pi lam x^2) decreases once 2 pi lam x (x+1) >= 1
  double x0 = std::sqrt(1.0 / (2 * M_PI * lam));
  int N = std::max(2, static_cast<int>(std::ceil(x0)) + 1);
  double target = -(static_cast<double>(prec) + 4) * std::log(2.0);
  for (;; ++N) {
    double rho = 4 * std::exp(-M_PI * lam * (2 * N + 1));
    if (rho >= 0.5) continue;
    double lt = std::log(8.0 * (N + 1) * (N + 1)) - M_PI * lam * N * N - std::log1p(-rho);
    if (lt < target) break;
  }
  Ball pi = Ball::pi(p);
  std::array<Rat, 2> shift{frac(1, 2) + u * Y[0], frac(1, 2) + u * Y[1]};
  Ball s(p);
  for (int n1 = -N; n1 <= N; ++n1)
    for (int n2 = -N; n2 <= N; ++n2) {
      std::array<Rat, 2> v{Rat(n1) + shift[0], Rat(n2) + shift[1]};
      Rat w = rabs(Rat(i == 1 ? n1 : n2) + frac(1, 2));
      s += B(w, p) * exp(-(pi * quad_im(tau, v, p)));
    }
  Ball lamb = Ball::from_double(lam, p), one = B(1, p);
  Ball rho = B(4, p) * exp(-(pi * lamb * B(2 * N + 1, p)));
  Ball tail = B(8, p) * sqr(B(N + 1, p)) * exp(-(pi * lamb * sqr(B(N, p)))) / (one - rho);
  mpfr_t t;
  mpfr_init2(t, 64);
  tail.upper(t);
  s.add_error(t);
  mpfr_clear(t);
  return s;
}

Ball lattice_weighted_bound(const PeriodMatrix& tau, const std::array<Rat, 2>& Y, int i, long p) {
  Rat d = delta_a_plus_y(Y);
  return c2_constant(Y[i - 1], p) *
         exp(-(Ball::pi(p) * (tau.trace_im() - B(2, p) * tau.im12()) * B(d * d, p)));
}

}  // namespace ah
