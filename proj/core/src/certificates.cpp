#include "abelheight/certificates.hpp"

#include <map>

namespace ah {

namespace {

Ball B(long v, long p) { return Ball::from_si(v, p); }
Ball B(const Rat& q, long p) { return Ball::from_mpq(q, p); }
Ball D(double x, long p) { return Ball::from_double(x, p); }

Rat rat_of(double x) {
  Rat r;
  mpq_set_d(r.get_mpq_t(), x);
  return r;
}

Ball log10_of(const Ball& x, long p) { return log(x) / log(B(10, p)); }

int sign_of(const Ball& x) {
  if (x.is_positive()) return 1;
  if (x.is_negative()) return -1;
  return 0;
}

NamedConstant constant(std::string name, std::string formula, const ExactExpr& e, long p) {
  return NamedConstant{std::move(name), std::move(formula), e.str(), e.log10(p)};
}

NamedConstant constant(std::string name, std::string formula, std::string value) {
  return NamedConstant{std::move(name), std::move(formula), std::move(value), std::nullopt};
}

Int pow_int(long base, unsigned long e) {
  Int r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(base), e);
  return r;
}

void add_counting_hypotheses(BoundCertificate& c, const CountingInputs& in, bool f2_inf) {
  if (in.siegel_reports.empty()) {
    c.hypotheses.push_back({"tau_v in F_{2,inf} at every archimedean place", false, "not supplied"});
  }
  for (size_t i = 0; i < in.siegel_reports.size(); ++i) {
    const auto& r = in.siegel_reports[i];
    bool ok = f2_inf ? r.in_F2_inf : r.in_F2_eps;
    c.hypotheses.push_back({std::string("tau_") + std::to_string(i) +
                                (f2_inf ? " in F_{2,inf}" : " in F_{2,eps}"),
                            ok, ok ? "checked" : "fails the finitely checkable conditions"});
  }
  if (in.tr_inf && in.log_d) {
    bool ok = rat_of(*in.tr_inf) >= 64 * rat_of(*in.log_d);
    c.hypotheses.push_back({"Tr_inf >= 64 log N(D)", ok,
                            std::to_string(*in.tr_inf) + " vs 64 * " + std::to_string(*in.log_d)});
  } else {
    c.hypotheses.push_back({"Tr_inf >= 64 log N(D)", false, "not supplied"});
  }
}

}  // namespace

std::string ExactExpr::str() const {
  std::string s = coefficient.get_str();
  for (const auto& f : factors) s += " * " + f.base.get_str() + "^" + f.exponent.get_str();
  return s;
}

Ball ExactExpr::log10(long p) const {
  long wp = p + 64;
  Ball ln10 = log(B(10, wp));
  Ball s = log(abs(B(coefficient, wp))) / ln10;
  for (const auto& f : factors)
    s += Ball::from_mpz(f.exponent, wp) * log(Ball::from_mpz(f.base, wp)) / ln10;
  return s;
}

std::string to_string(BoundKind k) {
  switch (k) {
    case BoundKind::height_lower: return "height_lower";
    case BoundKind::torsion: return "torsion";
    case BoundKind::rational_points: return "rational_points";
    case BoundKind::product_case: return "product_case";
  }
  return "unknown";
}

bool BoundCertificate::conclusive() const {
  for (const auto& h : hypotheses)
    if (!h.satisfied) return false;
  return true;
}

Int exponent_3_16(long k, long d) { return Int(k) * pow_int(3, 16) * Int(d); }

BoundCertificate jacobian_lower_bound(long d, double tr_inf, double log_d,
                                      const std::vector<SiegelReport>& reports, bool product,
                                      long prec) {
  if (d < 1) throw std::domain_error("jacobian_lower_bound: d must be positive");
  if (product)
    throw RefusedError(
        "jacobian_lower_bound: refused for a product of elliptic curves (3-torsion points lie "
        "on the polarization divisor)");
  BoundCertificate c;
  c.kind = BoundKind::height_lower;
  if (reports.empty())
    c.hypotheses.push_back({"tau_v in F_{2,eps} at every archimedean place", false, "not supplied"});
  for (size_t i = 0; i < reports.size(); ++i) {
    const auto& r = reports[i];
    c.hypotheses.push_back({"tau_" + std::to_string(i) + " in F_{2,eps}", r.in_F2_eps,
                            "eps = " + r.epsilon.get_str()});
  }
  ExactExpr c1{frac(1, 160 * d), {{240, -exponent_3_16(8, d)}}};
  ExactExpr nmax{2, {{240, exponent_3_16(4, d)}}};
  c.constants.push_back(constant("c1", "1/(160*d*240^(8*3^16*d))", c1, prec));
  c.constants.push_back(constant("bracket", "Tr - 63*log(N(D))", "63"));
  c.constants.push_back(constant("multiple_bound", "2*240^(4*3^16*d)", nmax, prec));
  c.constants.push_back(constant("exponent", "8*3^16*d", exponent_3_16(8, d).get_str()));
  Ball bracket = D(tr_inf, prec) - B(63, prec) * D(log_d, prec);
  if (!c.conclusive()) {
    c.note = "inconclusive: hypotheses not satisfied";
    return c;
  }
  c.sign = sign_of(bracket);
  if (c.sign != 0) c.value_log10 = c1.log10(prec) + log10_of(abs(bracket), prec);
  if (c.sign > 0)
    c.note = "either [n]P = O with n <= multiple_bound, or h(P) >= c1 * bracket > 0";
  else if (c.sign < 0)
    c.note = "bracket negative: the bound is vacuous";
  else
    c.note = "bracket sign undetermined at this precision";
  return c;
}

BoundCertificate torsion_bound(long d, const CountingInputs& in, long prec) {
  if (d < 1) throw std::domain_error("torsion_bound: d must be positive");
  BoundCertificate c;
  c.kind = BoundKind::torsion;
  add_counting_hypotheses(c, in, true);
  ExactExpr v{16, {{240, exponent_3_16(16, d)}}};
  c.constants.push_back(constant("exponent", "16*3^16*d", exponent_3_16(16, d).get_str()));
  c.constants.push_back(constant("torsion_count", "2^4*240^(16*3^16*d)", v, prec));
  if (!c.conclusive()) {
    c.note = "inconclusive: hypotheses not satisfied";
    return c;
  }
  c.sign = 1;
  c.value_exact = v;
  c.value_log10 = v.log10(prec);
  c.note = "|A(k)_tors| <= value";
  return c;
}

BoundCertificate rational_points_bound(long d, long rank, const CountingInputs& in, long prec) {
  if (d < 1) throw std::domain_error("rational_points_bound: d must be positive");
  if (rank < 0) throw std::domain_error("rational_points_bound: rank must be nonnegative");
  BoundCertificate c;
  c.kind = BoundKind::rational_points;
  add_counting_hypotheses(c, in, true);
  Int e2 = Int(d + 1) * pow_int(2, 35);
  ExactExpr c2{1, {{240, e2}}};
  ExactExpr v{1, {{240, e2 * Int(rank + 1)}}};
  c.constants.push_back(constant("c2", "240^((d+1)*2^35)", c2, prec));
  c.constants.push_back(constant("exponent", "(rank+1)*(d+1)*2^35", Int(e2 * Int(rank + 1)).get_str()));
  if (!c.conclusive()) {
    c.note = "inconclusive: hypotheses not satisfied";
    return c;
  }
  c.sign = 1;
  c.value_exact = v;
  c.value_log10 = v.log10(prec);
  c.note = "|C(k)| <= c2^(rank+1)";
  return c;
}

BoundCertificate product_case_bound(double tr1, double log_disc1, double tr2, double log_disc2,
                                    long d, long m, long prec) {
  if (d < 1 || m < 1) throw std::domain_error("product_case_bound: d, m must be positive");
  BoundCertificate c;
  c.kind = BoundKind::product_case;
  bool h1 = 7 * rat_of(tr1) >= rat_of(log_disc1);
  bool h2 = 7 * rat_of(tr2) >= rat_of(log_disc2);
  c.hypotheses.push_back({"Tr_inf(E1) >= log N(Delta_E1)/7", h1, ""});
  c.hypotheses.push_back({"Tr_inf(E2) >= log N(Delta_E2)/7", h2, ""});
  Int p20 = pow_int(20, static_cast<unsigned long>(4 * m));
  Rat c1 = frac(3, 10) / (Rat(d) * p20);
  Rat c2 = Rat(1) / (Rat(24 * d) * p20);
  Rat c3 = frac(32, 12 * d), c4 = frac(1, 12 * d);
  Rat c0 = (c1 - 7 * c2) / (c3 + 7 * c4);
  c0.canonicalize();
  // c0 = coefficient * 20^{-4m}
  ExactExpr e{c0 * p20, {{20, Int(-4 * m)}}};
  ExactExpr rounded{frac(25, 10000), {{20, Int(-4 * m)}}};
  c.constants.push_back(constant("c1", "0.3/(d*20^(4*m))", ExactExpr{frac(3, 10 * d), {{20, Int(-4 * m)}}}, prec));
  c.constants.push_back(constant("c2", "1/(24*d*20^(4*m))", ExactExpr{frac(1, 24 * d), {{20, Int(-4 * m)}}}, prec));
  c.constants.push_back(constant("c3", "32/(12*d)", c3.get_str()));
  c.constants.push_back(constant("c4", "1/(12*d)", c4.get_str()));
  c.constants.push_back(constant("c0", "(c1-7*c2)/(c3+7*c4)", e, prec));
  c.constants.push_back(constant("c0_rounded", "0.0025/20^(4*m)", rounded, prec));
  if (!c.conclusive()) {
    c.note = "inconclusive: hypotheses not satisfied";
    return c;
  }
  c.sign = c0 > 0 ? 1 : (c0 < 0 ? -1 : 0);
  c.value_exact = e;
  c.value_log10 = e.log10(prec);
  c.note = "h(P1,P2) >= c0 * h_F(E1 x E2)";
  return c;
}

Genus2Constant genus2_constant(long d, long prec) {
  if (d < 1) throw std::domain_error("genus2_constant: d must be positive");
  Genus2Constant g;
  g.exponent = exponent_3_16(8, d);
  // with X = 240^{8 3^16 d}: c1 = 1/(160 d X), c2 = 63/(160 d X)
  Ball num = B(frac(1, 160 * d) - frac(63, 160 * d * 64), prec);
  Ball c3 = (B(5, prec) * Ball::pi(prec) + B(2, prec)) / B(20 * d, prec);
  Ball c4 = B(frac(1, 10 * d), prec);
  g.coefficient = num / (c3 + c4 / B(64, prec));
  return g;
}

std::vector<std::pair<std::string, std::string>> constants_manifest() {
  return {
      {"height_c1", "1/(160*d*240^(8*3^16*d))"},
      {"height_bracket_coefficient", "63"},
      {"trace_hypothesis_coefficient", "64"},
      {"multiple_bound", "2*240^(4*3^16*d)"},
      {"torsion_count", "2^4*240^(16*3^16*d)"},
      {"rational_points_c2", "240^((d+1)*2^35)"},
      {"faltings_c3", "(5*pi+2)/(20*d)"},
      {"faltings_c4", "1/(10*d)"},
      {"elliptic_faltings_c3", "32/(12*d)"},
      {"elliptic_faltings_c4", "1/(12*d)"},
      {"elliptic_height_c1", "0.3/(d*20^(4*m))"},
      {"elliptic_height_slope", "1/7.2"},
      {"product_c2", "1/(24*d*20^(4*m))"},
      {"product_c0", "(c1-7*c2)/(c3+7*c4)"},
      {"product_c0_rounded", "0.0025/20^(4*m)"},
      {"genus2_c", "(c1-c2/64)*(c3+c4/64)^-1"},
      {"genus2_c_rounded", "0.00005/240^(8*3^16*d)"},
      {"pigeonhole_M", "240"},
      {"pigeonhole_range", "2*M^(4*m)"},
  };
}

std::string constants_manifest_text() {
  std::string s;
  for (const auto& [k, v] : constants_manifest()) s += k + " = " + v + "\n";
  return s;
}

int zero_lemma_filter(const std::array<bool, 3>& on_theta) {
  for (int i = 0; i < 3; ++i)
    if (!on_theta[i]) return i;
  throw ZeroLemmaViolation("zero_lemma_filter: P1, P2 and P1+P2 all flagged on Theta");
}

namespace {

long box_index(const Rat& x, long M) {
  Rat r = x + frac(1, 2);
  Int f;
  mpz_fdiv_q(f.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  Rat frac = r - Rat(f);  // reduced coordinate + 1/2, in [0, 1)
  Rat s = frac * M;
  Int k;
  mpz_fdiv_q(k.get_mpz_t(), s.get_num_mpz_t(), s.get_den_mpz_t());
  return k.get_si();
}

}  // namespace

bool pigeonhole_conditions(const std::vector<std::vector<TorusPoint>>& orbits, long M,
                           const std::vector<bool>& on_theta, long n) {
  if (n < 1 || static_cast<size_t>(n) >= on_theta.size() || on_theta[n]) return false;
  Rat lim(1, M);
  for (const auto& orb : orbits) {
    if (static_cast<size_t>(n) >= orb.size()) return false;
    if (orb[n].reduced().norm() > lim) return false;
  }
  return true;
}

PigeonholeResult pigeonhole_multiplier(const std::vector<std::vector<TorusPoint>>& orbits, long M,
                                       const std::vector<bool>& on_theta) {
  if (M < 2) throw std::domain_error("pigeonhole_multiplier: M must be at least 2");
  if (orbits.empty()) throw std::domain_error("pigeonhole_multiplier: no places");
  unsigned long m = orbits.size();
  Int L = 2 * pow_int(M, 4 * m);
  if (!L.fits_slong_p()) throw std::domain_error("pigeonhole_multiplier: range too large");
  long len = L.get_si() + 1;
  for (const auto& o : orbits)
    if (static_cast<long>(o.size()) < len)
      throw NoCollisionError("pigeonhole_multiplier: orbit shorter than 2 M^{4m} + 1");
  if (static_cast<long>(on_theta.size()) < len)
    throw NoCollisionError("pigeonhole_multiplier: theta flags shorter than 2 M^{4m} + 1");
  std::map<std::vector<long>, std::vector<long>> boxes;
  for (long n = 0; n < len; ++n) {
    std::vector<long> key;
    key.reserve(4 * m);
    for (const auto& o : orbits) {
      const TorusPoint& P = o[n];
      for (int i = 0; i < 2; ++i) key.push_back(box_index(P.X[i], M));
      for (int i = 0; i < 2; ++i) key.push_back(box_index(P.Y[i], M));
    }
    auto& b = boxes[key];
    b.push_back(n);
    if (b.size() < 3) continue;
    PigeonholeResult r;
    r.indices = {b[0], b[1], b[2]};
    r.candidates = {b[1] - b[0], b[2] - b[1], b[2] - b[0]};
    std::array<bool, 3> flags{};
    for (int i = 0; i < 3; ++i) flags[i] = on_theta[r.candidates[i]];
    r.selected = zero_lemma_filter(flags);
    r.n = r.candidates[r.selected];
    if (!pigeonhole_conditions(orbits, M, on_theta, r.n))
      throw std::logic_error("pigeonhole_multiplier: orbit data inconsistent with [n]P coordinates");
    return r;
  }
  throw NoCollisionError("pigeonhole_multiplier: no box holds three indices");
}

}  // namespace ah
