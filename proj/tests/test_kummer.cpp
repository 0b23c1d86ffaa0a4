#include <gtest/gtest.h>

#include <cmath>

#include "abelheight/kummer.hpp"
#include "support.hpp"

using namespace ah;

namespace {

Curve x5p1() { return Curve::from_longs({1, 0, 0, 0, 0, 1}); }

KummerPoint kp(long a, long b, long c, long d) { return {Rat(a), Rat(b), Rat(c), Rat(d)}; }

bool projectively_equal(const KummerPoint& a, const KummerPoint& b) { return normalize(a) == normalize(b); }

// Small curves with several points each: (curve, divisor) pairs with P and [2]P off Theta.
std::vector<ahtest::Sample> sample_pairs(unsigned seed, int curves, int multiples) {
  std::mt19937_64 rng(seed);
  std::vector<ahtest::Sample> out;
  for (int c = 0; c < curves; ++c) {
    auto s = ahtest::random_sample(rng, 2, true, 40);
    if (!s) continue;
    for (int n = 1; n <= multiples; ++n) {
      Divisor P = scalar_mul(s->C, s->D, n);
      out.push_back({s->C, P});
    }
  }
  return out;
}

}  // namespace

TEST(KummerMap, Examples) {
  Curve C = x5p1();
  Divisor S = cantor_add(C, embed_point(C, 0, 1), embed_point(C, -1, 0));
  EXPECT_EQ(kummer_map(C, S), kp(1, -1, 0, 2));
  EXPECT_EQ(kummer_map(C, embed_point(C, -1, 0)), kp(0, 1, -1, 1));
  EXPECT_EQ(kummer_map(C, zero_divisor()), kp(0, 0, 0, 1));
}

TEST(KummerMap, NormalizedAndOnQuartic) {
  for (const auto& s : sample_pairs(1, 6, 6)) {
    KummerPoint k = kummer_map(s.C, s.D);
    EXPECT_EQ(k, normalize(k));
    EXPECT_EQ(kummer_quartic(s.C, k), 0);
  }
}

TEST(Duplicate, Examples) {
  Curve C = x5p1();
  Duplicated w = duplicate(C, kummer_map(C, embed_point(C, -1, 0)));
  EXPECT_EQ(w.point, kp(0, 0, 0, 1));
  EXPECT_EQ(w.delta1, 0);
  EXPECT_EQ(duplicate(C, kp(0, 0, 0, 1)).point, kp(0, 0, 0, 1));
}

TEST(Duplicate, ConsistentWithCantorDoubling) {
  int checked = 0;
  for (const auto& s : sample_pairs(2, 20, 6)) {
    Divisor two = cantor_double(s.C, s.D);
    if (is_on_theta(s.D) || is_on_theta(two)) continue;
    Duplicated d = duplicate(s.C, kummer_map(s.C, s.D));
    EXPECT_TRUE(projectively_equal(d.point, kummer_map(s.C, two)));
    EXPECT_NE(d.delta1, 0);
    ++checked;
  }
  EXPECT_GE(checked, 100);
}

TEST(Duplicate, DiagonalDivisors) {
  // [2](x, y) has u with a double root.
  std::mt19937_64 rng(41);
  int checked = 0;
  for (int t = 0; t < 30; ++t) {
    auto s = ahtest::random_sample(rng, 2, true, 60);
    ASSERT_TRUE(s);
    Rat x = -s->D.u.coeff(1) / 2 - frac(1, 2);  // x1 of the generating pair
    Rat y2 = s->C.eval(x);
    Rat y = sqrt(y2.get_num()) ;
    if (y * y != y2 || y == 0) continue;
    Divisor P = embed_point(s->C, x, y);
    Divisor two = cantor_double(s->C, P);
    ASSERT_EQ(two.u.deg(), 2);
    ASSERT_EQ(two.u.coeff(1) * two.u.coeff(1), 4 * two.u.coeff(0));  // double root
    KummerPoint k = kummer_map(s->C, two);
    EXPECT_EQ(kummer_quartic(s->C, k), 0);
    Divisor four = cantor_double(s->C, two);
    if (is_on_theta(four)) continue;
    EXPECT_TRUE(projectively_equal(duplicate(s->C, k).point, kummer_map(s->C, four)));
    EXPECT_TRUE(projectively_equal(duplicate(s->C, kummer_map(s->C, P)).point, k));
    ++checked;
  }
  EXPECT_GE(checked, 5);
}

TEST(NaiveHeight, Examples) {
  EXPECT_TRUE(naive_height(kp(0, 0, 0, 1)).contains(Rat(0)));
  Ball l2 = Ball::log2();
  EXPECT_TRUE(naive_height(kp(1, -1, 0, 2)).overlaps(l2));
  KummerPoint q{frac(1, 2), Rat(1), Rat(0), Rat(3)};
  EXPECT_TRUE(naive_height(q).overlaps(log(Ball::from_si(6))));
  auto prim = primitive(q);
  EXPECT_EQ(prim[0], 1);
  EXPECT_EQ(prim[1], 2);
  EXPECT_EQ(prim[3], 6);
}

TEST(DuplicationTable, GrammarRoundTrip) {
  auto parsed = parse_duplication_table(duplication_table_text());
  ASSERT_EQ(parsed.size(), duplication_table().size());
  for (size_t i = 0; i < parsed.size(); ++i) {
    EXPECT_EQ(parsed[i].index, duplication_table()[i].index);
    EXPECT_EQ(parsed[i].c, duplication_table()[i].c);
    int kd = 0, ad = 0;
    for (int e : parsed[i].e) kd += e;
    for (int e : parsed[i].m) ad += e;
    EXPECT_EQ(kd, 4);
    EXPECT_LE(ad, 4);
  }
  EXPECT_THROW(parse_duplication_table("1 1 0 0 0 0 0 0 0 0 0 x\n"), std::runtime_error);
  EXPECT_THROW(parse_duplication_table("1 1 0 0 0 0 0 0 0 0 0 1x\n"), std::runtime_error);
  EXPECT_EQ(parse_duplication_table("1 4 0 0 0 0 0 0 0 0 0 -010\n")[0].c, -10);
  EXPECT_EQ(parse_duplication_table("1 4 0 0 0 0 0 0 0 0 0 +7\n")[0].c, 7);
}

TEST(LocalHeight, GoodPrimeHasNoCorrection) {
  Curve C = x5p1();
  Divisor S = cantor_add(C, embed_point(C, 0, 1), embed_point(C, -1, 0));
  LocalHeightReport r = local_lambda_finite(C, S, Int(3), 10);
  EXPECT_TRUE(r.mu.is_exact());
  EXPECT_TRUE(r.mu.contains(Rat(0)));
  EXPECT_TRUE(r.tail_bound.contains(Rat(0)));
}

TEST(LocalHeight, OnThetaIsAnError) {
  Curve C = x5p1();
  EXPECT_THROW(local_lambda_finite(C, embed_point(C, 0, 1), Int(2), 5), std::domain_error);
  EXPECT_THROW(local_lambda_finite(C, zero_divisor(), Int(2), 5), std::domain_error);
}

TEST(LocalHeight, FiniteLowerBound) {
  int checked = 0;
  for (const auto& s : sample_pairs(3, 8, 5)) {
    if (is_on_theta(s.D)) continue;
    for (const auto& p : bad_primes(s.C)) {
      LocalHeightReport r = local_lambda_finite(s.C, s.D, p, 12);
      long k = 4 * valuation(Int(2), p) + valuation(s.C.disc(), p);
      Ball floor = -(Ball::from_mpq(frac(k, 3)) * log(Ball::from_mpz(p)));
      EXPECT_FALSE(r.lambda_canonical.certainly_lt(floor)) << "p = " << p;
      ++checked;
    }
  }
  EXPECT_GE(checked, 50);
}

TEST(Stoll, SandwichAtBadPrimes) {
  int checked = 0;
  for (const auto& s : sample_pairs(4, 10, 5)) {
    KummerPoint k = kummer_map(s.C, s.D);
    Int d16 = Int(16) * s.C.disc();
    for (const auto& p : bad_primes(s.C)) {
      long drop = stoll_drop(s.C, k, p);
      EXPECT_GE(drop, 0);                       // E_p <= 1
      EXPECT_LE(drop, valuation(d16, p));       // E_p >= |2^4 disc|_p
      ++checked;
    }
  }
  EXPECT_GE(checked, 50);
}

TEST(CanonicalHeight, TorsionIsZero) {
  Curve C = x5p1();
  EXPECT_TRUE(canonical_height(C, embed_point(C, -1, 0), 1e-8).value.contains(Rat(0)));
  // (0,1) + (-1,0) has order 10 on this curve
  Divisor S = cantor_add(C, embed_point(C, 0, 1), embed_point(C, -1, 0));
  ASSERT_TRUE(scalar_mul(C, S, 10).is_zero());
  EXPECT_TRUE(canonical_height(C, S, 1e-10).value.contains(Rat(0)));
}

TEST(CanonicalHeight, FrozenValueAndDeeperOracle) {
  Curve C = Curve::from_longs({1, -1, 0, 0, 0, 1});
  Divisor D = cantor_add(C, embed_point(C, 0, 1), embed_point(C, 1, 1));
  CanonicalHeight h = canonical_height(C, D, 1e-8);
  // the same limit with four more doubling steps of depth
  CanonicalHeight deep = canonical_height(C, D, 1e-8 / 256);
  EXPECT_GE(deep.depth_inf, h.depth_inf + 4);
  EXPECT_TRUE(h.value.overlaps(deep.value));
  EXPECT_LE(h.value.rad_d(), 1e-8);
  Ball frozen = Ball::from_double(0.58911886907265570);
  frozen.add_error_d(1e-13);
  EXPECT_TRUE(deep.value.overlaps(frozen));
  // exact iteration h(K_{2^n P}) / 4^n stays within B(C) 4^-n / 3 of the limit
  KummerPoint k = kummer_map(C, D);
  for (int n = 0; n <= 7; ++n) {
    double hn = naive_height(k).mid_d() / std::pow(4.0, n);
    EXPECT_LE(std::fabs(hn - 0.58911886907265570), h.step_bound * std::pow(4.0, -n) / 3 + 1e-12);
    k = duplicate(C, k).point;
  }
}

TEST(CanonicalHeight, QuadraticAndEven) {
  int checked = 0;
  for (const auto& s : sample_pairs(5, 4, 4)) {
    CanonicalHeight h1 = canonical_height(s.C, s.D, 1e-9);
    CanonicalHeight h2 = canonical_height(s.C, cantor_double(s.C, s.D), 1e-9);
    CanonicalHeight hn = canonical_height(s.C, negate(s.D), 1e-9);
    Ball four = Ball::from_si(4);
    EXPECT_TRUE(h2.value.overlaps(four * h1.value));
    EXPECT_TRUE(hn.value.overlaps(h1.value));
    EXPECT_EQ(hn.value.mid_d(), h1.value.mid_d());
    ++checked;
  }
  EXPECT_GE(checked, 10);
}

TEST(CanonicalHeight, UnreachableTargetIsPrecisionError) {
  Curve C = x5p1();
  Divisor S = cantor_add(C, embed_point(C, 0, 1), embed_point(C, -1, 0));
  EXPECT_THROW(canonical_height(C, S, 1e-200), PrecisionError);
}

TEST(ThreeTorsion, RationalPointLocalHeights) {
  // h^2 - u^3 = F with u = x^2 + 1, h = x^3 + x^2; R = (u, h mod u) has order 3.
  Curve C = Curve::from_longs({-1, 0, -3, 0, -2, 2});
  Divisor R = make_divisor(C, QPoly({Rat(1), Rat(0), Rat(1)}), QPoly({Rat(-1), Rat(-1)}));
  ASSERT_TRUE(scalar_mul(C, R, 3).is_zero());
  KummerPoint k = kummer_map(C, R);
  Duplicated d = duplicate(C, k);
  EXPECT_EQ(d.point, k);  // [2]R = -R
  for (const auto& p : bad_primes(C)) {
    LocalHeightReport r = local_lambda_finite(C, R, p, 30);
    // lambda_p(R) = (1/3) log |delta_1(K_R)|_p
    Ball expect = -(Ball::from_mpq(frac(valuation(d.delta1, p), 3)) * log(Ball::from_mpz(p)));
    EXPECT_TRUE(r.lambda_canonical.overlaps(expect)) << "p = " << p;
  }
  EXPECT_TRUE(canonical_height(C, R, 1e-9).value.contains(Rat(0)));
}
