// Shared generators for the unit and acceptance tests.
#pragma once

#include <random>
#include <vector>

#include "abelheight/jacobian.hpp"
#include "abelheight/theta.hpp"

namespace ahtest {

using ah::Curve;
using ah::Divisor;
using ah::Int;
using ah::Rat;

// Monic quintic through (x1, y1) and (x1 + 1, y2) with random a2..a4, so that
// D = (x1, y1) + (x1 + 1, y2) has deg u = 2.
struct Sample {
  Curve C;
  Divisor D;
};

inline std::optional<Sample> random_sample(std::mt19937_64& rng, int h = 3, bool monic = true,
                                           long max_coeff = 1000000) {
  std::uniform_int_distribution<int> co(-h, h), yy(-2 * h, 2 * h);
  std::uniform_int_distribution<int> lead(1, 3);
  for (int attempt = 0; attempt < 100; ++attempt) {
    Int a5 = monic ? 1 : lead(rng);
    Int a4 = co(rng), a3 = co(rng), a2 = co(rng);
    Int x1 = co(rng), x2 = x1 + 1;
    Int y1 = yy(rng), y2 = yy(rng);
    auto rest = [&](const Int& x) -> Int { return a5 * x * x * x * x * x + a4 * x * x * x * x + a3 * x * x * x + a2 * x * x; };
    // a1 x + a0 = y^2 - rest(x) at x1 and x2 = x1 + 1
    Int r1 = y1 * y1 - rest(x1), r2 = y2 * y2 - rest(x2);
    Int a1 = r2 - r1;
    Int a0 = r1 - a1 * x1;
    std::array<Int, 6> a{a0, a1, a2, a3, a4, a5};
    Int disc = ah::poly_discriminant({a0, a1, a2, a3, a4, a5});
    if (disc == 0) continue;
    if (abs(a0) > max_coeff || abs(a1) > max_coeff) continue;
    Curve C(a);
    Divisor D = ah::cantor_add(C, ah::embed_point(C, Rat(x1), Rat(y1)), ah::embed_point(C, Rat(x2), Rat(y2)));
    if (D.u.deg() != 2) continue;
    return Sample{C, D};
  }
  return std::nullopt;
}

inline Rat random_rat(std::mt19937_64& rng, long lo_num, long hi_num, long den) {
  std::uniform_int_distribution<long> d(lo_num, hi_num);
  return ah::frac(d(rng), den);
}

// Reduced period matrix with Im t11 in [t_lo, t_hi], Im t22 >= Im t11 and
// 0 <= Im t12 <= Im t11 / 2 scaled by `ratio`.
inline ah::PeriodMatrix random_reduced_tau(std::mt19937_64& rng, long t_lo, long t_hi,
                                           double ratio = 1.0, std::array<Rat, 6>* entries = nullptr,
                                           long prec = ah::kDefaultPrecision) {
  std::uniform_int_distribution<long> re(-50, 50), f(0, 1000);
  Rat t1 = Rat(t_lo) + ah::frac(f(rng) * (t_hi - t_lo), 1000);
  Rat t2 = t1 + ah::frac(f(rng), 100);
  Rat t12 = t1 / 2 * ah::frac(static_cast<long>(ratio * f(rng)), 1000);
  std::array<Rat, 6> e{ah::frac(re(rng), 100), t1, ah::frac(re(rng), 100), t12, ah::frac(re(rng), 100), t2};
  if (entries) *entries = e;
  return ah::PeriodMatrix::from_rationals(e, prec);
}

}  // namespace ahtest
