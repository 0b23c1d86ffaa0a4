#include "abelheight/jacobian.hpp"

#include <stdexcept>

namespace ah {

Curve::Curve(const std::array<Int, 6>& a) : a_(a) {
  if (a_[5] == 0) throw std::domain_error("curve: a5 must be nonzero");
  disc_ = poly_discriminant(F_int());
  if (disc_ == 0) throw std::domain_error("curve: F has a repeated root");
  D_ = disc_ * 256;
}

Curve Curve::from_longs(std::initializer_list<long> a) {
  if (a.size() != 6) throw std::domain_error("curve: expected six coefficients");
  std::array<Int, 6> c;
  size_t i = 0;
  for (long x : a) c[i++] = x;
  return Curve(c);
}

IntPoly Curve::F_int() const { return IntPoly(a_.begin(), a_.end()); }

QPoly Curve::F() const {
  std::vector<Rat> c(6);
  for (int i = 0; i < 6; ++i) c[i] = a_[i];
  return QPoly(std::move(c));
}

Rat Curve::eval(const Rat& x) const {
  Rat r = 0;
  for (int i = 5; i >= 0; --i) r = r * x + a_[i];
  return r;
}

Divisor zero_divisor() { return Divisor{QPoly::constant(1), QPoly()}; }

Divisor embed_point(const Curve& C, const Rat& x, const Rat& y) {
  if (y * y != C.eval(x)) throw std::domain_error("embed_point: point not on the curve");
  return Divisor{QPoly::x_minus(x), QPoly::constant(y)};
}

bool is_valid(const Curve& C, const Divisor& D) {
  if (D.u.is_zero() || D.u.lead() != 1 || D.u.deg() > 2) return false;
  if (D.v.deg() >= std::max(D.u.deg(), 1) && !(D.u.deg() == 0 && D.v.is_zero())) return false;
  if (D.u.deg() == 0) return D.v.is_zero();
  return ((C.F() - D.v * D.v) % D.u).is_zero();
}

Divisor make_divisor(const Curve& C, const QPoly& u, const QPoly& v) {
  Divisor D{u, v};
  if (!is_valid(C, D)) throw std::domain_error("invalid Mumford pair");
  return D;
}

Divisor negate(const Divisor& D) { return Divisor{D.u, -D.v}; }

namespace {

Divisor reduce(const QPoly& F, QPoly u, QPoly v) {
  v = v % u;
  while (u.deg() > 2) {
    u = ((F - v * v) / u).monic();
    v = (-v) % u;
  }
  u = u.monic();
  v = v % u;
  return Divisor{u, v};
}

}  // namespace

Divisor cantor_add(const Curve& C, const Divisor& D1, const Divisor& D2) {
  if (D1.is_zero()) return D2;
  if (D2.is_zero()) return D1;
  QPoly F = C.F();
  QPoly e1, e2, c1, c2;
  QPoly d0 = xgcd(D1.u, D2.u, e1, e2);
  QPoly d = xgcd(d0, D1.v + D2.v, c1, c2);
  QPoly s1 = c1 * e1, s2 = c1 * e2, s3 = c2;
  QPoly u = (D1.u * D2.u) / (d * d);
  QPoly v = (s1 * D1.u * D2.v + s2 * D2.u * D1.v + s3 * (D1.v * D2.v + F)) / d;
  return reduce(F, u, v);
}

Divisor cantor_double(const Curve& C, const Divisor& D) { return cantor_add(C, D, D); }

Divisor scalar_mul(const Curve& C, const Divisor& D, const Int& n) {
  if (n < 0) return negate(scalar_mul(C, D, -n));
  Divisor r = zero_divisor(), b = D;
  Int k = n;
  while (k > 0) {
    if (mpz_odd_p(k.get_mpz_t())) r = cantor_add(C, r, b);
    k >>= 1;
    if (k > 0) b = cantor_double(C, b);
  }
  return r;
}

bool is_on_theta(const Divisor& D) { return D.u.deg() <= 1; }

}  // namespace ah
