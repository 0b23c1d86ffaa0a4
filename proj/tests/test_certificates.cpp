#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "abelheight/certificates.hpp"
#include "abelheight/faltings.hpp"
#include "support.hpp"

using namespace ah;

namespace {

constexpr long kP = kDefaultPrecision;

Ball B(const Rat& q, long p = kP) { return Ball::from_mpq(q, p); }

Ball log10_ball(long v, long p = kP) { return log(Ball::from_si(v, p)) / log(Ball::from_si(10, p)); }

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const NamedConstant& find_constant(const BoundCertificate& c, const std::string& name) {
  for (const auto& k : c.constants)
    if (k.name == name) return k;
  throw std::runtime_error("missing constant " + name);
}

CountingInputs good_inputs() {
  CountingInputs in;
  in.tr_inf = 640;
  in.log_d = 10;
  in.siegel_reports.push_back(siegel_checks(PeriodMatrix::from_rationals({0, 31, 0, 1, 0, 31}), frac(1, 31)));
  return in;
}

// Orbit n -> n Z reduced, for n = 0..len-1.
std::vector<TorusPoint> orbit_of(const TorusPoint& Z, long len) {
  std::vector<TorusPoint> o;
  for (long n = 0; n < len; ++n) o.push_back(Z.scaled(n).reduced());
  return o;
}

}  // namespace

TEST(Manifest, MatchesReviewedFile) {
  EXPECT_EQ(constants_manifest_text(), read_file(AH_MANIFEST_FILE));
  auto m = constants_manifest();
  auto get = [&](const std::string& k) {
    for (auto& [a, b] : m)
      if (a == k) return b;
    return std::string();
  };
  FaltingsReport f = faltings_upper_bound(1, 1, 1);
  EXPECT_EQ(get("faltings_c3"), f.c3_formula);
  EXPECT_EQ(get("faltings_c4"), f.c4_formula);
  BoundCertificate h = jacobian_lower_bound(1, 64, 1, {});
  EXPECT_EQ(get("height_c1"), find_constant(h, "c1").formula);
  EXPECT_EQ(get("multiple_bound"), find_constant(h, "multiple_bound").formula);
  BoundCertificate t = torsion_bound(1);
  EXPECT_EQ(get("torsion_count"), find_constant(t, "torsion_count").formula);
  BoundCertificate r = rational_points_bound(1, 0);
  EXPECT_EQ(get("rational_points_c2"), find_constant(r, "c2").formula);
  BoundCertificate p = product_case_bound(1, 1, 1, 1, 1, 1);
  EXPECT_EQ(get("elliptic_height_c1"), find_constant(p, "c1").formula);
  EXPECT_EQ(get("product_c2"), find_constant(p, "c2").formula);
  EXPECT_EQ(get("elliptic_faltings_c3"), find_constant(p, "c3").formula);
  EXPECT_EQ(get("elliptic_faltings_c4"), find_constant(p, "c4").formula);
  EXPECT_EQ(get("height_c1"), "1/(160*d*240^(8*3^16*d))");
  EXPECT_EQ(get("product_c0"), find_constant(p, "c0").formula);
  EXPECT_EQ(get("product_c0_rounded"), find_constant(p, "c0_rounded").formula);
}

TEST(Exponents, ExactIntegers) {
  EXPECT_EQ(exponent_3_16(1, 1), Int(43046721));
  EXPECT_EQ(exponent_3_16(8, 1), Int(344373768));
  EXPECT_EQ(exponent_3_16(16, 1), Int(688747536));
  EXPECT_EQ(exponent_3_16(16, 2), Int(2) * Int(688747536));
  Int two35;
  mpz_ui_pow_ui(two35.get_mpz_t(), 2, 35);
  EXPECT_EQ(two35, Int("34359738368"));
}

TEST(JacobianLowerBound, Examples) {
  std::vector<SiegelReport> reps{siegel_checks(PeriodMatrix::from_rationals({0, 31, 0, 1, 0, 31}), frac(1, 31))};
  ASSERT_TRUE(reps[0].in_F2_eps);
  BoundCertificate pos = jacobian_lower_bound(1, 64 * 2.5, 2.5, reps);
  EXPECT_TRUE(pos.conclusive());
  EXPECT_EQ(pos.sign, 1);
  ASSERT_TRUE(pos.value_log10);
  // log10 c1 = -(344373768 log10 240 + log10 160)
  Ball lc1 = -(Ball::from_si(344373768) * log10_ball(240) + log10_ball(160));
  EXPECT_TRUE(find_constant(pos, "c1").log10->overlaps(lc1));
  EXPECT_TRUE(pos.value_log10->overlaps(lc1 + log(Ball::from_double(2.5)) / log(Ball::from_si(10))));
  EXPECT_EQ(find_constant(pos, "exponent").value, "344373768");

  BoundCertificate neg = jacobian_lower_bound(1, 10, 1, reps);
  EXPECT_EQ(neg.sign, -1);

  BoundCertificate none = jacobian_lower_bound(1, 640, 1, {});
  EXPECT_FALSE(none.conclusive());
  EXPECT_FALSE(none.value_log10);

  std::vector<SiegelReport> bad{siegel_checks(PeriodMatrix::from_rationals({0, 31, 0, 0, 0, 31}), frac(1, 31))};
  EXPECT_FALSE(jacobian_lower_bound(1, 640, 1, bad).conclusive());
}

TEST(JacobianLowerBound, RefusesProducts) {
  EXPECT_THROW(jacobian_lower_bound(1, 640, 1, {}, true), RefusedError);
}

TEST(TorsionBound, Values) {
  BoundCertificate t = torsion_bound(1, good_inputs());
  ASSERT_TRUE(t.conclusive());
  EXPECT_EQ(find_constant(t, "exponent").value, "688747536");
  Ball expected = Ball::from_si(4) * log10_ball(2) + Ball::from_si(688747536) * log10_ball(240);
  EXPECT_TRUE(t.value_log10->overlaps(expected));
  BoundCertificate t2 = torsion_bound(2, good_inputs());
  EXPECT_EQ(find_constant(t2, "exponent").value, Int(Int(2) * 688747536).get_str());
  EXPECT_FALSE(torsion_bound(1).conclusive());
  CountingInputs weak = good_inputs();
  weak.tr_inf = 639;
  EXPECT_FALSE(torsion_bound(1, weak).conclusive());
}

TEST(RationalPointsBound, Values) {
  BoundCertificate r0 = rational_points_bound(1, 0, good_inputs());
  ASSERT_TRUE(r0.conclusive());
  Ball e36 = Ball::from_mpz(Int("68719476736"));
  EXPECT_TRUE(r0.value_log10->overlaps(e36 * log10_ball(240)));
  BoundCertificate r3 = rational_points_bound(1, 3, good_inputs());
  EXPECT_TRUE(r3.value_log10->overlaps(Ball::from_si(4) * *r0.value_log10));
  EXPECT_THROW(rational_points_bound(1, -1), std::domain_error);
}

TEST(ProductCase, ExactConstant) {
  BoundCertificate c = product_case_bound(1, 7, 2, 1, 1, 1);
  ASSERT_TRUE(c.conclusive());  // Tr1 = logDisc1 / 7 exactly
  ASSERT_TRUE(c.value_exact);
  // c0 = 1/(390 * 20^4)
  EXPECT_EQ(c.value_exact->coefficient, frac(1, 390));
  ASSERT_EQ(c.value_exact->factors.size(), 1u);
  EXPECT_EQ(c.value_exact->factors[0].base, Int(20));
  EXPECT_EQ(c.value_exact->factors[0].exponent, Int(-4));
  EXPECT_GT(frac(1, 390), frac(25, 10000));
  EXPECT_LT(frac(1, 390) - frac(25, 10000), frac(1, 10000));
  EXPECT_FALSE(product_case_bound(1, 7.5, 2, 1, 1, 1).conclusive());
}

TEST(ProductCase, PositiveForAllDM) {
  for (long d = 1; d <= 12; ++d)
    for (long m = 1; m <= 6; ++m) {
      BoundCertificate c = product_case_bound(1, 0, 1, 0, d, m);
      ASSERT_TRUE(c.value_exact);
      EXPECT_GT(c.value_exact->coefficient, 0) << d << " " << m;
      EXPECT_EQ(c.value_exact->coefficient, frac(1, 390)) << d << " " << m;
      EXPECT_EQ(c.sign, 1);
      EXPECT_EQ(c.value_exact->factors[0].exponent, Int(-4 * m));
    }
}

TEST(Genus2, ExactVersusRounded) {
  Genus2Constant g = genus2_constant(1);
  EXPECT_EQ(g.exponent, Int(344373768));
  EXPECT_EQ(g.rounded, frac(5, 100000));
  Ball pi = Ball::pi(kP);
  Ball expected = B(frac(1, 10240)) / ((Ball::from_si(5) * pi + Ball::from_si(2)) / Ball::from_si(20) + B(frac(1, 640)));
  EXPECT_TRUE(g.coefficient.overlaps(expected));
  EXPECT_NEAR(g.coefficient.mid_d(), 1.101e-4, 1e-7);
  EXPECT_TRUE(g.coefficient.certainly_gt(B(g.rounded)));
  Genus2Constant g2 = genus2_constant(2);
  EXPECT_TRUE(g2.coefficient.overlaps(g.coefficient));
  EXPECT_EQ(g2.exponent, Int(2) * Int(344373768));
}

TEST(ZeroLemma, Examples) {
  EXPECT_EQ(zero_lemma_filter({true, true, false}), 2);
  EXPECT_EQ(zero_lemma_filter({false, true, true}), 0);
  EXPECT_EQ(zero_lemma_filter({false, false, false}), 0);
  EXPECT_EQ(zero_lemma_filter({true, false, true}), 1);
  EXPECT_THROW(zero_lemma_filter({true, true, true}), ZeroLemmaViolation);
}

TEST(Pigeonhole, FifthTorsionExample) {
  long M = 2, len = 2 * 16 + 1;
  TorusPoint Z{{frac(1, 5), 0}, {0, 0}};
  auto orb = orbit_of(Z, len);
  std::vector<bool> flags(len, false);
  flags[0] = true;
  // exhaustive oracle: first n with [n]Z = 0 on the torus
  long first_zero = 0;
  for (long n = 1; n < len; ++n)
    if (orb[n].norm() == 0) {
      first_zero = n;
      break;
    }
  EXPECT_EQ(first_zero, 5);
  EXPECT_TRUE(pigeonhole_conditions({orb}, M, flags, 5));
  PigeonholeResult r = pigeonhole_multiplier({orb}, M, flags);
  EXPECT_TRUE(pigeonhole_conditions({orb}, M, flags, r.n));
  // with [1..4]P flagged on Theta the first qualifying multiple is 5
  std::vector<bool> strict(len, false);
  for (long n = 0; n <= 4; ++n) strict[n] = true;
  long first = 0;
  for (long n = 1; n < len; ++n)
    if (pigeonhole_conditions({orb}, M, strict, n)) {
      first = n;
      break;
    }
  EXPECT_EQ(first, 5);
}

TEST(Pigeonhole, ZeroPointQualifiesAtOne) {
  long len = 33;
  auto orb = orbit_of(TorusPoint{{0, 0}, {0, 0}}, len);
  std::vector<bool> flags(len, false);
  EXPECT_TRUE(pigeonhole_conditions({orb}, 2, flags, 1));
  PigeonholeResult r = pigeonhole_multiplier({orb}, 2, flags);
  EXPECT_EQ(r.n, 1);
}

TEST(Pigeonhole, AgreesWithExhaustiveSearch) {
  std::mt19937_64 rng(81);
  std::uniform_int_distribution<long> den(2, 60), coin(0, 3);
  for (int t = 0; t < 20; ++t) {
    long M = t < 10 ? 2 : 3;
    int places = t % 5 == 4 ? 2 : 1;
    if (places == 2) M = 2;
    long len = 2;
    for (int i = 0; i < 4 * places; ++i) len *= M;
    len += 1;
    std::vector<std::vector<TorusPoint>> orbits;
    for (int v = 0; v < places; ++v) {
      long q = den(rng);
      std::uniform_int_distribution<long> num(0, q - 1);
      TorusPoint Z{{frac(num(rng), q), frac(num(rng), q)}, {frac(num(rng), q), frac(num(rng), q)}};
      orbits.push_back(orbit_of(Z, len));
    }
    // Theta flags on odd multiples only, so no candidate triple is entirely flagged.
    std::vector<bool> flags(len, false);
    flags[0] = true;
    for (long n = 1; n < len; n += 2) flags[n] = coin(rng) == 0;
    std::vector<long> oracle;
    for (long n = 1; n < len; ++n)
      if (pigeonhole_conditions(orbits, M, flags, n)) oracle.push_back(n);
    PigeonholeResult r = pigeonhole_multiplier(orbits, M, flags);
    EXPECT_TRUE(std::find(oracle.begin(), oracle.end(), r.n) != oracle.end()) << t;
    EXPECT_FALSE(flags[r.n]) << t;
    for (long c : r.candidates) {
      EXPECT_GE(c, 1);
      EXPECT_LE(c, len - 1) << t;  // n_i - n_j <= 2 M^{4m}
    }
    EXPECT_EQ(r.candidates[2], r.candidates[0] + r.candidates[1]);
    // direct re-evaluation of the box conditions
    Rat lim = frac(1, M);
    for (const auto& o : orbits) EXPECT_LE(o[r.n].reduced().norm(), lim);
  }
}

TEST(Pigeonhole, TruncatedOrbitIsAnError) {
  auto orb = orbit_of(TorusPoint{{frac(1, 7), 0}, {0, 0}}, 10);
  std::vector<bool> flags(10, false);
  EXPECT_THROW(pigeonhole_multiplier({orb}, 2, flags), NoCollisionError);
}
