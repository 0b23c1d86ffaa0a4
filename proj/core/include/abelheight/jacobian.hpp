// Genus-2 curves y^2 = F(x) with deg F = 5 and their Jacobians in Mumford form.
#pragma once

#include <array>

#include "abelheight/exact.hpp"

namespace ah {

class Curve {
 public:
  // Coefficients a0..a5 of F; requires a5 != 0 and disc(F) != 0.
  explicit Curve(const std::array<Int, 6>& a);
  static Curve from_longs(std::initializer_list<long> a);

  const std::array<Int, 6>& a() const { return a_; }
  const Int& disc() const { return disc_; }
  // D = 2^8 disc(F)
  const Int& D() const { return D_; }
  QPoly F() const;
  IntPoly F_int() const;
  Rat eval(const Rat& x) const;
  bool operator==(const Curve& o) const { return a_ == o.a_; }

 private:
  std::array<Int, 6> a_;
  Int disc_;
  Int D_;
};

struct Divisor {
  QPoly u;  // monic, degree 0..2
  QPoly v;  // deg v < deg u
  bool is_zero() const { return u.deg() == 0; }
  bool operator==(const Divisor& o) const { return u == o.u && v == o.v; }
};

Divisor zero_divisor();
// [(x, y) - oo]
Divisor embed_point(const Curve& C, const Rat& x, const Rat& y);
// Validate a Mumford pair (u monic, deg v < deg u, u | v^2 - F, deg u <= 2).
bool is_valid(const Curve& C, const Divisor& D);
Divisor make_divisor(const Curve& C, const QPoly& u, const QPoly& v);
Divisor negate(const Divisor& D);
Divisor cantor_add(const Curve& C, const Divisor& D1, const Divisor& D2);
Divisor cantor_double(const Curve& C, const Divisor& D);
Divisor scalar_mul(const Curve& C, const Divisor& D, const Int& n);
bool is_on_theta(const Divisor& D);

}  // namespace ah
