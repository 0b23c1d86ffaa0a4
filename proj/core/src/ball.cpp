#include "abelheight/ball.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ah {

namespace {

constexpr mpfr_prec_t kRadPrec = 64;

struct Tmp {
  explicit Tmp(mpfr_prec_t p = kRadPrec) { mpfr_init2(v, p); }
  ~Tmp() { mpfr_clear(v); }
  Tmp(const Tmp&) = delete;
  Tmp& operator=(const Tmp&) = delete;
  mpfr_t v;
};

// rad += |mid| * 2^-prec when the midpoint was rounded (bound on half an ulp).
void add_round_err(mpfr_ptr rad, mpfr_srcptr mid, int ternary) {
  if (ternary == 0) return;
  Tmp e;
  mpfr_abs(e.v, mid, MPFR_RNDU);
  mpfr_mul_2si(e.v, e.v, -static_cast<long>(mpfr_get_prec(mid)), MPFR_RNDU);
  mpfr_add(rad, rad, e.v, MPFR_RNDU);
}

long pmax(const Ball& a, const Ball& b) { return std::max(a.prec(), b.prec()); }

}  // namespace

class BallOps {
 public:
  static mpfr_ptr mid(Ball& b) { return b.mid_; }
  static mpfr_ptr rad(Ball& b) { return b.rad_; }
};

Ball::Ball(long prec) {
  mpfr_init2(mid_, prec);
  mpfr_init2(rad_, kRadPrec);
  mpfr_set_zero(mid_, 1);
  mpfr_set_zero(rad_, 1);
}

Ball::Ball(const Ball& o) {
  mpfr_init2(mid_, mpfr_get_prec(o.mid_));
  mpfr_init2(rad_, kRadPrec);
  mpfr_set(mid_, o.mid_, MPFR_RNDN);
  mpfr_set(rad_, o.rad_, MPFR_RNDU);
}

Ball::Ball(Ball&& o) noexcept {
  mpfr_init2(mid_, mpfr_get_prec(o.mid_));
  mpfr_init2(rad_, kRadPrec);
  mpfr_swap(mid_, o.mid_);
  mpfr_swap(rad_, o.rad_);
}

Ball& Ball::operator=(const Ball& o) {
  if (this != &o) {
    mpfr_set_prec(mid_, mpfr_get_prec(o.mid_));
    mpfr_set(mid_, o.mid_, MPFR_RNDN);
    mpfr_set(rad_, o.rad_, MPFR_RNDU);
  }
  return *this;
}

Ball& Ball::operator=(Ball&& o) noexcept {
  mpfr_swap(mid_, o.mid_);
  mpfr_swap(rad_, o.rad_);
  return *this;
}

Ball::~Ball() {
  mpfr_clear(mid_);
  mpfr_clear(rad_);
}

Ball Ball::from_si(long v, long prec) {
  Ball r(prec);
  int t = mpfr_set_si(r.mid_, v, MPFR_RNDN);
  add_round_err(r.rad_, r.mid_, t);
  return r;
}

Ball Ball::from_mpz(const mpz_class& v, long prec) {
  Ball r(prec);
  int t = mpfr_set_z(r.mid_, v.get_mpz_t(), MPFR_RNDN);
  add_round_err(r.rad_, r.mid_, t);
  return r;
}

Ball Ball::from_mpq(const mpq_class& v, long prec) {
  Ball r(prec);
  int t = mpfr_set_q(r.mid_, v.get_mpq_t(), MPFR_RNDN);
  add_round_err(r.rad_, r.mid_, t);
  return r;
}

Ball Ball::from_double(double v, long prec) {
  Ball r(prec);
  int t = mpfr_set_d(r.mid_, v, MPFR_RNDN);
  add_round_err(r.rad_, r.mid_, t);
  return r;
}

Ball Ball::from_interval(mpfr_srcptr lo, mpfr_srcptr hi, long prec) {
  Ball r(prec);
  Tmp s(std::max<mpfr_prec_t>(mpfr_get_prec(lo), mpfr_get_prec(hi)) + 2);
  mpfr_add(s.v, lo, hi, MPFR_RNDN);
  mpfr_div_2ui(s.v, s.v, 1, MPFR_RNDN);
  mpfr_set(r.mid_, s.v, MPFR_RNDN);
  Tmp a, b;
  mpfr_sub(a.v, hi, r.mid_, MPFR_RNDU);
  mpfr_sub(b.v, r.mid_, lo, MPFR_RNDU);
  mpfr_max(r.rad_, a.v, b.v, MPFR_RNDU);
  if (mpfr_sgn(r.rad_) < 0) mpfr_set_zero(r.rad_, 1);
  return r;
}

Ball Ball::pi(long prec) {
  Ball r(prec);
  int t = mpfr_const_pi(r.mid_, MPFR_RNDN);
  add_round_err(r.rad_, r.mid_, t);
  return r;
}

Ball Ball::log2(long prec) {
  Ball r(prec);
  int t = mpfr_const_log2(r.mid_, MPFR_RNDN);
  add_round_err(r.rad_, r.mid_, t);
  return r;
}

void Ball::lower(mpfr_t out) const { mpfr_sub(out, mid_, rad_, MPFR_RNDD); }
void Ball::upper(mpfr_t out) const { mpfr_add(out, mid_, rad_, MPFR_RNDU); }

double Ball::lower_d() const {
  Tmp t(prec() + 8);
  lower(t.v);
  return mpfr_get_d(t.v, MPFR_RNDD);
}

double Ball::upper_d() const {
  Tmp t(prec() + 8);
  upper(t.v);
  return mpfr_get_d(t.v, MPFR_RNDU);
}

bool Ball::contains_zero() const {
  return mpfr_cmpabs(mid_, rad_) <= 0;
}

bool Ball::contains(const mpq_class& q) const {
  mpq_class m, r;
  mpfr_get_q(m.get_mpq_t(), mid_);
  mpfr_get_q(r.get_mpq_t(), rad_);
  return abs(q - m) <= r;
}

bool Ball::contains(const Ball& o) const {
  mpq_class m, r, om, orad;
  mpfr_get_q(m.get_mpq_t(), mid_);
  mpfr_get_q(r.get_mpq_t(), rad_);
  mpfr_get_q(om.get_mpq_t(), o.mid_);
  mpfr_get_q(orad.get_mpq_t(), o.rad_);
  return abs(om - m) + orad <= r;
}

bool Ball::contains_interior(const Ball& o) const {
  mpq_class m, r, om, orad;
  mpfr_get_q(m.get_mpq_t(), mid_);
  mpfr_get_q(r.get_mpq_t(), rad_);
  mpfr_get_q(om.get_mpq_t(), o.mid_);
  mpfr_get_q(orad.get_mpq_t(), o.rad_);
  return abs(om - m) + orad < r;
}

Ball Ball::midpoint() const {
  Ball r(prec());
  mpfr_set(r.mid_, mid_, MPFR_RNDN);
  return r;
}

bool Ball::overlaps(const Ball& o) const {
  mpq_class m, r, om, orad;
  mpfr_get_q(m.get_mpq_t(), mid_);
  mpfr_get_q(r.get_mpq_t(), rad_);
  mpfr_get_q(om.get_mpq_t(), o.mid_);
  mpfr_get_q(orad.get_mpq_t(), o.rad_);
  return abs(om - m) <= r + orad;
}

bool Ball::is_positive() const {
  Tmp l(prec() + 8);
  lower(l.v);
  return mpfr_sgn(l.v) > 0;
}

bool Ball::is_negative() const {
  Tmp u(prec() + 8);
  upper(u.v);
  return mpfr_sgn(u.v) < 0;
}

bool Ball::certainly_lt(const Ball& o) const {
  long p = pmax(*this, o) + 8;
  Tmp u(p), l(p);
  upper(u.v);
  o.lower(l.v);
  return mpfr_less_p(u.v, l.v) != 0;
}

bool Ball::certainly_le(const Ball& o) const {
  long p = pmax(*this, o) + 8;
  Tmp u(p), l(p);
  upper(u.v);
  o.lower(l.v);
  return mpfr_lessequal_p(u.v, l.v) != 0;
}

double Ball::rel_radius() const {
  if (mpfr_zero_p(mid_)) return mpfr_zero_p(rad_) ? 0.0 : INFINITY;
  Tmp t;
  mpfr_abs(t.v, mid_, MPFR_RNDD);
  mpfr_div(t.v, rad_, t.v, MPFR_RNDU);
  return mpfr_get_d(t.v, MPFR_RNDU);
}

Ball& Ball::add_error(mpfr_srcptr e) {
  Tmp a;
  mpfr_abs(a.v, e, MPFR_RNDU);
  mpfr_add(rad_, rad_, a.v, MPFR_RNDU);
  return *this;
}

Ball& Ball::add_error_d(double e) {
  Tmp a;
  mpfr_set_d(a.v, e < 0 ? -e : e, MPFR_RNDU);
  mpfr_add(rad_, rad_, a.v, MPFR_RNDU);
  return *this;
}

Ball Ball::with_prec(long p) const {
  Ball r(p);
  int t = mpfr_set(r.mid_, mid_, MPFR_RNDN);
  mpfr_set(r.rad_, rad_, MPFR_RNDU);
  add_round_err(r.rad_, r.mid_, t);
  return r;
}

Ball Ball::mul_2si(long e) const {
  Ball r(*this);
  mpfr_mul_2si(r.mid_, r.mid_, e, MPFR_RNDN);
  mpfr_mul_2si(r.rad_, r.rad_, e, MPFR_RNDU);
  return r;
}

std::string Ball::mid_str(int digits) const {
  if (digits <= 0) digits = static_cast<int>(prec() * 0.30103) + 2;
  char* s = nullptr;
  mpfr_asprintf(&s, "%.*Re", digits - 1, mid_);
  std::string out(s);
  mpfr_free_str(s);
  return out;
}

std::string Ball::rad_str(int digits) const {
  if (digits <= 0) digits = static_cast<int>(prec() * 0.30103) + 2;
  Tmp r, e;
  mpfr_set(r.v, rad_, MPFR_RNDU);
  // the printed midpoint carries `digits` significant digits
  mpfr_abs(e.v, mid_, MPFR_RNDU);
  Tmp ten;
  mpfr_set_ui(ten.v, 10, MPFR_RNDU);
  mpfr_pow_si(ten.v, ten.v, 1 - digits, MPFR_RNDU);
  mpfr_mul(e.v, e.v, ten.v, MPFR_RNDU);
  mpfr_add(r.v, r.v, e.v, MPFR_RNDU);
  char* s = nullptr;
  mpfr_asprintf(&s, "%.6RUe", r.v);
  std::string out(s);
  mpfr_free_str(s);
  return out;
}

Ball operator+(const Ball& a, const Ball& b) {
  Ball r(pmax(a, b));
  int t = mpfr_add(BallOps::mid(r), a.mid(), b.mid(), MPFR_RNDN);
  mpfr_add(BallOps::rad(r), a.rad(), b.rad(), MPFR_RNDU);
  add_round_err(BallOps::rad(r), r.mid(), t);
  return r;
}

Ball operator-(const Ball& a, const Ball& b) {
  Ball r(pmax(a, b));
  int t = mpfr_sub(BallOps::mid(r), a.mid(), b.mid(), MPFR_RNDN);
  mpfr_add(BallOps::rad(r), a.rad(), b.rad(), MPFR_RNDU);
  add_round_err(BallOps::rad(r), r.mid(), t);
  return r;
}

Ball operator-(const Ball& a) {
  Ball r(a);
  mpfr_neg(BallOps::mid(r), r.mid(), MPFR_RNDN);
  return r;
}

Ball operator*(const Ball& a, const Ball& b) {
  Ball r(pmax(a, b));
  int t = mpfr_mul(BallOps::mid(r), a.mid(), b.mid(), MPFR_RNDN);
  Tmp x, y, z;
  mpfr_abs(x.v, a.mid(), MPFR_RNDU);
  mpfr_mul(x.v, x.v, b.rad(), MPFR_RNDU);
  mpfr_abs(y.v, b.mid(), MPFR_RNDU);
  mpfr_mul(y.v, y.v, a.rad(), MPFR_RNDU);
  mpfr_mul(z.v, a.rad(), b.rad(), MPFR_RNDU);
  mpfr_add(x.v, x.v, y.v, MPFR_RNDU);
  mpfr_add(BallOps::rad(r), x.v, z.v, MPFR_RNDU);
  add_round_err(BallOps::rad(r), r.mid(), t);
  return r;
}

Ball operator/(const Ball& a, const Ball& b) {
  if (b.contains_zero()) throw std::domain_error("ball division by a ball containing zero");
  Ball r(pmax(a, b));
  int t = mpfr_div(BallOps::mid(r), a.mid(), b.mid(), MPFR_RNDN);
  if (!a.is_exact() || !b.is_exact()) {
    Tmp num, x, den, bl;
    mpfr_abs(num.v, b.mid(), MPFR_RNDU);
    mpfr_mul(num.v, num.v, a.rad(), MPFR_RNDU);
    mpfr_abs(x.v, a.mid(), MPFR_RNDU);
    mpfr_mul(x.v, x.v, b.rad(), MPFR_RNDU);
    mpfr_add(num.v, num.v, x.v, MPFR_RNDU);
    mpfr_abs(den.v, b.mid(), MPFR_RNDD);
    mpfr_sub(bl.v, den.v, b.rad(), MPFR_RNDD);
    mpfr_mul(den.v, den.v, bl.v, MPFR_RNDD);
    mpfr_div(BallOps::rad(r), num.v, den.v, MPFR_RNDU);
  }
  add_round_err(BallOps::rad(r), r.mid(), t);
  return r;
}

Ball inv(const Ball& a) { return Ball::from_si(1, a.prec()) / a; }

Ball sqr(const Ball& a) {
  Ball m = a * a;
  // clip to the nonnegative axis
  if (!m.contains_zero()) return m;
  Tmp lo(m.prec() + 8), hi(m.prec() + 8);
  mpfr_set_zero(lo.v, 1);
  m.upper(hi.v);
  return Ball::from_interval(lo.v, hi.v, m.prec());
}

Ball sqrt(const Ball& a) {
  long p = a.prec();
  Tmp lo(p + 8), hi(p + 8);
  a.lower(lo.v);
  if (mpfr_sgn(lo.v) < 0) throw std::domain_error("sqrt of a ball with negative part");
  a.upper(hi.v);
  mpfr_sqrt(lo.v, lo.v, MPFR_RNDD);
  mpfr_sqrt(hi.v, hi.v, MPFR_RNDU);
  return Ball::from_interval(lo.v, hi.v, p);
}

Ball sqrt_nonneg(const Ball& a) {
  long p = a.prec();
  Tmp lo(p + 8), hi(p + 8);
  a.lower(lo.v);
  a.upper(hi.v);
  if (mpfr_sgn(hi.v) < 0) throw std::domain_error("sqrt of a negative ball");
  if (mpfr_sgn(lo.v) < 0) mpfr_set_zero(lo.v, 1);
  mpfr_sqrt(lo.v, lo.v, MPFR_RNDD);
  mpfr_sqrt(hi.v, hi.v, MPFR_RNDU);
  return Ball::from_interval(lo.v, hi.v, p);
}

Ball exp(const Ball& a) {
  long p = a.prec();
  Tmp lo(p + 8), hi(p + 8);
  a.lower(lo.v);
  a.upper(hi.v);
  mpfr_exp(lo.v, lo.v, MPFR_RNDD);
  mpfr_exp(hi.v, hi.v, MPFR_RNDU);
  return Ball::from_interval(lo.v, hi.v, p);
}

Ball log(const Ball& a) {
  long p = a.prec();
  Tmp lo(p + 8), hi(p + 8);
  a.lower(lo.v);
  if (mpfr_sgn(lo.v) <= 0) throw std::domain_error("log of a ball not bounded away from zero");
  a.upper(hi.v);
  mpfr_log(lo.v, lo.v, MPFR_RNDD);
  mpfr_log(hi.v, hi.v, MPFR_RNDU);
  return Ball::from_interval(lo.v, hi.v, p);
}

Ball sin(const Ball& a) {
  Ball r(a.prec());
  int t = mpfr_sin(BallOps::mid(r), a.mid(), MPFR_RNDN);
  mpfr_set(BallOps::rad(r), a.rad(), MPFR_RNDU);
  add_round_err(BallOps::rad(r), r.mid(), t);
  return r;
}

Ball cos(const Ball& a) {
  Ball r(a.prec());
  int t = mpfr_cos(BallOps::mid(r), a.mid(), MPFR_RNDN);
  mpfr_set(BallOps::rad(r), a.rad(), MPFR_RNDU);
  add_round_err(BallOps::rad(r), r.mid(), t);
  return r;
}

Ball abs(const Ball& a) {
  if (!a.contains_zero()) return a.is_negative() ? -a : a;
  long p = a.prec();
  Tmp lo(p + 8), hi(p + 8);
  a.lower(lo.v);
  a.upper(hi.v);
  mpfr_abs(lo.v, lo.v, MPFR_RNDU);
  mpfr_max(hi.v, hi.v, lo.v, MPFR_RNDU);
  mpfr_set_zero(lo.v, 1);
  return Ball::from_interval(lo.v, hi.v, p);
}

Ball pow_ui(const Ball& a, unsigned long n) {
  Ball r = Ball::from_si(1, a.prec());
  Ball b = a;
  while (n) {
    if (n & 1) r = r * b;
    n >>= 1;
    if (n) b = sqr(b);
  }
  return r;
}

Ball max(const Ball& a, const Ball& b) {
  long p = pmax(a, b);
  Tmp l1(p + 8), l2(p + 8), h1(p + 8), h2(p + 8);
  a.lower(l1.v);
  b.lower(l2.v);
  a.upper(h1.v);
  b.upper(h2.v);
  mpfr_max(l1.v, l1.v, l2.v, MPFR_RNDD);
  mpfr_max(h1.v, h1.v, h2.v, MPFR_RNDU);
  return Ball::from_interval(l1.v, h1.v, p);
}

Ball min(const Ball& a, const Ball& b) {
  long p = pmax(a, b);
  Tmp l1(p + 8), l2(p + 8), h1(p + 8), h2(p + 8);
  a.lower(l1.v);
  b.lower(l2.v);
  a.upper(h1.v);
  b.upper(h2.v);
  mpfr_min(l1.v, l1.v, l2.v, MPFR_RNDD);
  mpfr_min(h1.v, h1.v, h2.v, MPFR_RNDU);
  return Ball::from_interval(l1.v, h1.v, p);
}

Ball hull(const Ball& a, const Ball& b) {
  long p = pmax(a, b);
  Tmp l1(p + 8), l2(p + 8), h1(p + 8), h2(p + 8);
  a.lower(l1.v);
  b.lower(l2.v);
  a.upper(h1.v);
  b.upper(h2.v);
  mpfr_min(l1.v, l1.v, l2.v, MPFR_RNDD);
  mpfr_max(h1.v, h1.v, h2.v, MPFR_RNDU);
  return Ball::from_interval(l1.v, h1.v, p);
}

double CBall::rad_d() const { return std::max(re.rad_d(), im.rad_d()); }

CBall operator+(const CBall& a, const CBall& b) { return CBall(a.re + b.re, a.im + b.im); }
CBall operator-(const CBall& a, const CBall& b) { return CBall(a.re - b.re, a.im - b.im); }

CBall operator*(const CBall& a, const CBall& b) {
  return CBall(a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re);
}

CBall operator/(const CBall& a, const CBall& b) {
  Ball n = abs2(b);
  CBall t = a * b.conj();
  return CBall(t.re / n, t.im / n);
}

CBall cinv(const CBall& z) { return CBall::from_si(1, z.prec()) / z; }

Ball abs2(const CBall& z) { return sqr(z.re) + sqr(z.im); }
Ball abs(const CBall& z) { return sqrt_nonneg(abs2(z)); }

CBall sqr(const CBall& z) {
  return CBall(sqr(z.re) - sqr(z.im), (z.re * z.im).mul_2si(1));
}

CBall exp(const CBall& z) {
  Ball e = exp(z.re);
  return CBall(e * cos(z.im), e * sin(z.im));
}

CBall expi2pi(const Ball& x) {
  Ball t = (Ball::pi(x.prec()) * x).mul_2si(1);
  return CBall(cos(t), sin(t));
}

CBall pow_ui(const CBall& z, unsigned long n) {
  CBall r = CBall::from_si(1, z.prec());
  CBall b = z;
  while (n) {
    if (n & 1) r = r * b;
    n >>= 1;
    if (n) b = sqr(b);
  }
  return r;
}

}  // namespace ah
