#include <gtest/gtest.h>

#include <random>

#include "abelheight/ball.hpp"
#include "abelheight/exact.hpp"

using namespace ah;

namespace {

// Determinant over Q by plain Gaussian elimination, independent of det_bareiss.
Rat det_q(std::vector<std::vector<Rat>> m) {
  size_t n = m.size();
  Rat det = 1;
  for (size_t c = 0; c < n; ++c) {
    size_t piv = c;
    while (piv < n && m[piv][c] == 0) ++piv;
    if (piv == n) return 0;
    if (piv != c) {
      std::swap(m[piv], m[c]);
      det = -det;
    }
    det *= m[c][c];
    for (size_t r = c + 1; r < n; ++r) {
      Rat f = m[r][c] / m[c][c];
      for (size_t k = c; k < n; ++k) m[r][k] -= f * m[c][k];
    }
  }
  return det;
}

Rat sylvester_resultant(const std::vector<long>& f, const std::vector<long>& g) {
  size_t n = f.size() - 1, m = g.size() - 1;
  std::vector<std::vector<Rat>> S(n + m, std::vector<Rat>(n + m, Rat(0)));
  for (size_t i = 0; i < m; ++i)
    for (size_t j = 0; j <= n; ++j) S[i][i + j] = f[n - j];
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j <= m; ++j) S[m + i][i + j] = g[m - j];
  return det_q(S);
}

Rat oracle_disc(const std::vector<long>& f) {
  std::vector<long> df;
  for (size_t i = 1; i < f.size(); ++i) df.push_back(static_cast<long>(i) * f[i]);
  long n = static_cast<long>(f.size()) - 1;
  Rat r = sylvester_resultant(f, df) / Rat(f.back());
  return (n * (n - 1) / 2) % 2 ? Rat(-r) : r;
}

IntPoly ip(std::initializer_list<long> c) {
  IntPoly p;
  for (long x : c) p.push_back(Int(x));
  return p;
}

}  // namespace

TEST(Discriminant, XFiveMinusOne) { EXPECT_EQ(poly_discriminant(ip({-1, 0, 0, 0, 0, 1})), 3125); }

TEST(Discriminant, RepeatedRootGivesZero) {
  EXPECT_EQ(poly_discriminant(ip({0, 0, 0, 1, -2, 1})), 0);
}

TEST(Discriminant, XFivePlusXMatchesSylvesterOracle) {
  Rat oracle = oracle_disc({0, 1, 0, 0, 0, 1});
  EXPECT_EQ(oracle, 256);  // frozen oracle value
  EXPECT_EQ(Rat(poly_discriminant(ip({0, 1, 0, 0, 0, 1}))), oracle);
}

TEST(Discriminant, RandomQuinticsMatchOracle) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<long> c(-9, 9);
  for (int t = 0; t < 40; ++t) {
    std::vector<long> f(6);
    for (auto& x : f) x = c(rng);
    if (f[5] == 0) f[5] = 1;
    IntPoly p;
    for (long x : f) p.push_back(Int(x));
    EXPECT_EQ(Rat(poly_discriminant(p)), oracle_disc(f));
  }
}

TEST(Discriminant, WrongDegreeThrows) {
  EXPECT_THROW(poly_discriminant(ip({1, 0, 1})), std::domain_error);
}

TEST(Discriminant, ShiftInvariant) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<long> c(-6, 6);
  for (int t = 0; t < 20; ++t) {
    IntPoly f;
    for (int i = 0; i < 5; ++i) f.push_back(Int(c(rng)));
    f.push_back(Int(1 + (t % 3)));
    long s = c(rng);
    // g(x) = f(x + s) by Horner on polynomials
    IntPoly g(6, Int(0));
    for (int i = 5; i >= 0; --i) {
      IntPoly h(6, Int(0));
      for (int k = 0; k < 5; ++k) {
        h[k + 1] += g[k];
        h[k] += g[k] * s;
      }
      h[0] += f[i];
      g = h;
    }
    EXPECT_EQ(poly_discriminant(f), poly_discriminant(g));
  }
}

TEST(Valuation, Examples) {
  Int a;
  mpz_ui_pow_ui(a.get_mpz_t(), 5, 5);
  EXPECT_EQ(valuation(Rat(a * 256), Int(5)), 5);
  EXPECT_EQ(valuation(frac(3, 8), Int(2)), -3);
  EXPECT_EQ(valuation(Rat(3125), Int(7)), 0);
}

TEST(Valuation, Errors) {
  EXPECT_THROW(valuation(Rat(0), Int(2)), std::domain_error);
  EXPECT_THROW(valuation(Rat(12), Int(6)), std::domain_error);
}

TEST(Resultant, Linear) {
  std::vector<std::string> v{"x", "a", "b"};
  MPoly r = resultant(MPoly::parse(v, "x - a"), MPoly::parse(v, "x - b"), "x");
  EXPECT_EQ(r, MPoly::parse(v, "a - b"));
}

TEST(Resultant, SharedRoot) {
  std::vector<std::string> v{"x"};
  EXPECT_TRUE(resultant(MPoly::parse(v, "x^2 - 1"), MPoly::parse(v, "x - 1"), "x").is_zero());
}

TEST(Resultant, TwoVariablesMatchesSylvester2x2) {
  std::vector<std::string> v{"x", "y"};
  MPoly f = MPoly::parse(v, "x^2 + y"), g = MPoly::parse(v, "x + y");
  // Sylvester matrix [[1, 0, y], [1, y, 0], [0, 1, y]] has determinant y^2 + y
  EXPECT_EQ(resultant(f, g, "x"), MPoly::parse(v, "y^2 + y"));
}

TEST(Resultant, SwapSign) {
  std::vector<std::string> v{"x", "y"};
  MPoly f = MPoly::parse(v, "x^3 + 2*x*y - y^2 + 1"), g = MPoly::parse(v, "x^2 - 3*y*x + 4");
  // (-1)^{3*2} = 1
  EXPECT_EQ(resultant(f, g, "x"), resultant(g, f, "x"));
  MPoly h = MPoly::parse(v, "x - y");
  EXPECT_EQ(resultant(f, h, "x"), -resultant(h, f, "x"));
}

TEST(Resultant, ConstantInVariableThrows) {
  std::vector<std::string> v{"x", "y"};
  EXPECT_THROW(resultant(MPoly::parse(v, "y + 1"), MPoly::parse(v, "x - y"), "x"), std::domain_error);
}

TEST(Resultant, UnivariateAgreesWithIntegerResultant) {
  std::vector<std::string> v{"x"};
  MPoly r = resultant(MPoly::parse(v, "x^5 + x"), MPoly::parse(v, "5*x^4 + 1"), "x");
  EXPECT_EQ(r, MPoly::constant(v, resultant(ip({0, 1, 0, 0, 0, 1}), ip({1, 0, 0, 0, 5}))));
}

TEST(Rational, AlwaysReduced) {
  Rat q = frac(6, -4);
  EXPECT_EQ(q.get_num(), -3);
  EXPECT_EQ(q.get_den(), 2);
}

TEST(Ball, InclusionAtTwoPrecisions) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<long> m(-1000000, 1000000);
  std::uniform_int_distribution<int> e(-20, 5);
  auto dyadic = [&] {
    Rat q(m(rng));
    int k = e(rng);
    return k >= 0 ? Rat(q * (Int(1) << k)) : frac(q.get_num(), Int(1) << -k);
  };
  for (int t = 0; t < 200; ++t) {
    Rat a = dyadic(), b = dyadic();
    if (b == 0) b = 1;
    for (long p : {53L, 200L}) {
      Ball A = Ball::from_mpq(a, p), Bb = Ball::from_mpq(b, p);
      EXPECT_TRUE((A + Bb).contains(Rat(a + b)));
      EXPECT_TRUE((A - Bb).contains(Rat(a - b)));
      EXPECT_TRUE((A * Bb).contains(Rat(a * b)));
      EXPECT_TRUE((A / Bb).contains(Rat(a / b)));
    }
    Ball lo = Ball::from_mpq(a, 53), hi = Ball::from_mpq(a, 300);
    EXPECT_TRUE(exp(lo.mul_2si(-20)).overlaps(exp(hi.mul_2si(-20))));
    EXPECT_TRUE(sin(lo).overlaps(sin(hi)));
    EXPECT_TRUE(cos(lo).overlaps(cos(hi)));
    if (a > 0) EXPECT_TRUE(log(lo).overlaps(log(hi)));
  }
}

TEST(Ball, InclusionOfWideInputs) {
  // exact image of every point: check the endpoints of [1, 2] under x^2 - 3x
  mpfr_t lo, hi;
  mpfr_init2(lo, 64);
  mpfr_init2(hi, 64);
  mpfr_set_ui(lo, 1, MPFR_RNDN);
  mpfr_set_ui(hi, 2, MPFR_RNDN);
  Ball x = Ball::from_interval(lo, hi, 64);
  Ball y = sqr(x) - Ball::from_si(3, 64) * x;
  for (Rat s : {Rat(1), frac(3, 2), Rat(2)}) EXPECT_TRUE(y.contains(Rat(s * s - 3 * s)));
  mpfr_clear(lo);
  mpfr_clear(hi);
}
