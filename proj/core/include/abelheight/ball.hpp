// Midpoint-radius ball arithmetic on top of MPFR.
//
// A Ball holds a midpoint at working precision and a radius kept at 64 bits,
// always rounded upward. Every operation returns a ball that contains the exact
// image of every point of its input balls.
#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <string>

namespace ah {

constexpr long kDefaultPrecision = 128;

class Ball {
 public:
  explicit Ball(long prec = kDefaultPrecision);
  Ball(const Ball& o);
  Ball(Ball&& o) noexcept;
  Ball& operator=(const Ball& o);
  Ball& operator=(Ball&& o) noexcept;
  ~Ball();

  static Ball from_si(long v, long prec = kDefaultPrecision);
  static Ball from_mpz(const mpz_class& v, long prec = kDefaultPrecision);
  static Ball from_mpq(const mpq_class& v, long prec = kDefaultPrecision);
  static Ball from_double(double v, long prec = kDefaultPrecision);
  // Ball enclosing the closed interval [lo, hi].
  static Ball from_interval(mpfr_srcptr lo, mpfr_srcptr hi, long prec);
  static Ball pi(long prec = kDefaultPrecision);
  static Ball log2(long prec = kDefaultPrecision);

  long prec() const { return static_cast<long>(mpfr_get_prec(mid_)); }
  mpfr_srcptr mid() const { return mid_; }
  mpfr_srcptr rad() const { return rad_; }
  double mid_d() const { return mpfr_get_d(mid_, MPFR_RNDN); }
  double rad_d() const { return mpfr_get_d(rad_, MPFR_RNDU); }

  // Lower and upper endpoints, rounded outward.
  void lower(mpfr_t out) const;
  void upper(mpfr_t out) const;
  double lower_d() const;
  double upper_d() const;

  bool contains_zero() const;
  bool contains(const mpq_class& q) const;
  bool contains(const Ball& other) const;
  // other lies in the open interior of this ball
  bool contains_interior(const Ball& other) const;
  bool overlaps(const Ball& other) const;
  bool is_positive() const;
  bool is_negative() const;
  bool is_exact() const { return mpfr_zero_p(rad_) != 0; }

  // Certainly-comparisons: true only if every point of the ball satisfies the relation.
  bool certainly_lt(const Ball& o) const;
  bool certainly_le(const Ball& o) const;
  bool certainly_gt(const Ball& o) const { return o.certainly_lt(*this); }
  bool certainly_ge(const Ball& o) const { return o.certainly_le(*this); }

  // Relative radius rad/|mid|, +inf if the midpoint is zero.
  double rel_radius() const;

  Ball& add_error(mpfr_srcptr e);
  Ball& add_error_d(double e);
  Ball with_prec(long prec) const;
  // Exact midpoint, radius zero.
  Ball midpoint() const;

  // Decimal rendering; the radius string accounts for the decimal rounding of the midpoint.
  std::string mid_str(int digits = 0) const;
  std::string rad_str(int digits = 0) const;

  friend Ball operator+(const Ball& a, const Ball& b);
  friend Ball operator-(const Ball& a, const Ball& b);
  friend Ball operator*(const Ball& a, const Ball& b);
  friend Ball operator/(const Ball& a, const Ball& b);
  friend Ball operator-(const Ball& a);
  Ball& operator+=(const Ball& b) { return *this = *this + b; }
  Ball& operator-=(const Ball& b) { return *this = *this - b; }
  Ball& operator*=(const Ball& b) { return *this = *this * b; }
  Ball& operator/=(const Ball& b) { return *this = *this / b; }

  Ball mul_2si(long e) const;

 private:
  friend class BallOps;
  mpfr_t mid_;
  mpfr_t rad_;
};

Ball sqr(const Ball& a);
Ball sqrt(const Ball& a);
// sqrt of a quantity known to be nonnegative; negative parts of the ball are clipped.
Ball sqrt_nonneg(const Ball& a);
Ball exp(const Ball& a);
Ball log(const Ball& a);
Ball sin(const Ball& a);
Ball cos(const Ball& a);
Ball abs(const Ball& a);
Ball pow_ui(const Ball& a, unsigned long n);
Ball max(const Ball& a, const Ball& b);
Ball min(const Ball& a, const Ball& b);
Ball inv(const Ball& a);
// Union hull of two balls.
Ball hull(const Ball& a, const Ball& b);

class CBall {
 public:
  explicit CBall(long prec = kDefaultPrecision) : re(prec), im(prec) {}
  CBall(Ball r, Ball i) : re(std::move(r)), im(std::move(i)) {}
  explicit CBall(const Ball& r) : re(r), im(r.prec()) {}
  static CBall from_si(long v, long prec = kDefaultPrecision) {
    return CBall(Ball::from_si(v, prec), Ball(prec));
  }
  static CBall from_mpq(const mpq_class& r, const mpq_class& i, long prec = kDefaultPrecision) {
    return CBall(Ball::from_mpq(r, prec), Ball::from_mpq(i, prec));
  }

  long prec() const { return re.prec() > im.prec() ? re.prec() : im.prec(); }
  bool contains_zero() const { return re.contains_zero() && im.contains_zero(); }
  bool overlaps(const CBall& o) const { return re.overlaps(o.re) && im.overlaps(o.im); }
  bool contains(const CBall& o) const { return re.contains(o.re) && im.contains(o.im); }
  // Upper bound on max(rad(re), rad(im)).
  double rad_d() const;
  CBall conj() const { return CBall(re, -im); }
  CBall midpoint() const { return CBall(re.midpoint(), im.midpoint()); }
  CBall mul_2si(long e) const { return CBall(re.mul_2si(e), im.mul_2si(e)); }

  friend CBall operator+(const CBall& a, const CBall& b);
  friend CBall operator-(const CBall& a, const CBall& b);
  friend CBall operator*(const CBall& a, const CBall& b);
  friend CBall operator/(const CBall& a, const CBall& b);
  friend CBall operator-(const CBall& a) { return CBall(-a.re, -a.im); }
  friend CBall operator*(const CBall& a, const Ball& b) { return CBall(a.re * b, a.im * b); }
  CBall& operator+=(const CBall& b) { return *this = *this + b; }
  CBall& operator-=(const CBall& b) { return *this = *this - b; }
  CBall& operator*=(const CBall& b) { return *this = *this * b; }
  CBall& operator/=(const CBall& b) { return *this = *this / b; }

  Ball re;
  Ball im;
};

Ball abs(const CBall& z);
Ball abs2(const CBall& z);
CBall sqr(const CBall& z);
CBall exp(const CBall& z);
// exp(2 pi i x) for real x
CBall expi2pi(const Ball& x);
CBall pow_ui(const CBall& z, unsigned long n);
CBall cinv(const CBall& z);

}  // namespace ah
