// Points of order 3 on the Jacobian, located numerically and certified.
//
// A point R = (u, v) of order 3 off Theta comes from h(x)^2 - u(x)^3 = t F(x)
// with h monic cubic and t != 0; then v = (h mod u) / sqrt(t). The three
// unknowns (u0, u1, t) solve a square system of degrees 4, 5, 6.
#pragma once

#include <array>
#include <complex>
#include <vector>

#include "abelheight/ball.hpp"
#include "abelheight/kummer.hpp"

namespace ah {

using CKummerPoint = std::array<CBall, 4>;

struct TorsionPoint {
  CBall u0, u1, t;  // certified enclosures of an isolated root
  CKummerPoint k;   // (1, -u1, u0, k4)
  CBall delta1;     // delta_1(K_R)
};

struct TorsionSolveStats {
  int paths = 0;
  int attempts = 0;
  int certified = 0;
};

// All 40 Kummer images of points of order 3, sorted lexicographically by midpoint.
// Throws PrecisionError if fewer than 40 disjoint certified roots are found.
std::vector<TorsionPoint> three_torsion_points(const Curve& C, long prec = 256,
                                               TorsionSolveStats* stats = nullptr);
std::vector<CKummerPoint> three_torsion_kummer(const Curve& C, long prec = 256);

// Product of delta_1(K_R) over the 80 points R of order 3 (each Kummer point counted twice).
CBall three_torsion_product(const Curve& C, long prec = 256);

// delta applied to a complex Kummer point.
CKummerPoint apply_delta(const Curve& C, const CKummerPoint& k);

}  // namespace ah
