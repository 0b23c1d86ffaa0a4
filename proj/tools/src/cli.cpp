#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <regex>

#include "abelheight/ball.hpp"
#include "abelheight/certificates.hpp"
#include "abelheight/faltings.hpp"
#include "abelheight/jacobian.hpp"
#include "abelheight/kummer.hpp"
#include "abelheight/theta.hpp"
#include "abelheight/torsion3.hpp"

namespace ahcli {

using namespace ah;

namespace {

CliError invalid(const std::string& msg) { return CliError(kValidation, "validation", msg); }

json ball_json(const Ball& b) {
  return {{"mid", b.mid_str()}, {"rad", b.rad_str()}, {"prec", b.prec()}};
}

json cball_json(const CBall& z) { return {{"re", ball_json(z.re)}, {"im", ball_json(z.im)}}; }

json rat_json(const Rat& q) { return q.get_str(); }

std::string trim(std::string s) {
  auto b = s.find_first_not_of(" \t\n");
  auto e = s.find_last_not_of(" \t\n");
  return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

Rat rat_from_json(const json& j) {
  if (j.is_string()) return parse_rat(j.get<std::string>());
  if (j.is_number()) return parse_rat(j.dump());
  throw invalid("expected a number or a rational string, got " + j.dump());
}

Int int_from_json(const json& j) {
  Rat q = rat_from_json(j);
  if (q.get_den() != 1) throw invalid("expected an integer, got " + j.dump());
  return q.get_num();
}

template <size_t N>
std::array<Rat, N> rat_array(const std::vector<Rat>& v, const char* what) {
  if (v.size() != N)
    throw invalid(std::string(what) + ": expected " + std::to_string(N) + " entries");
  std::array<Rat, N> a;
  for (size_t i = 0; i < N; ++i) a[i] = v[i];
  return a;
}

template <size_t N>
std::array<Rat, N> rat_array(const json& j, const char* what) {
  if (!j.is_array()) throw invalid(std::string(what) + ": expected an array");
  std::vector<Rat> v;
  for (const auto& e : j) v.push_back(rat_from_json(e));
  return rat_array<N>(v, what);
}

Curve make_curve(const JobSpec& job) {
  if (!job.curve) throw invalid("a curve [a0,...,a5] is required");
  try {
    return Curve(*job.curve);
  } catch (const std::exception& e) {
    throw invalid(e.what());
  }
}

QPoly qpoly(const std::vector<Rat>& c) { return QPoly(c); }

Divisor make_point(const Curve& C, const JobSpec& job) {
  Divisor D = zero_divisor();
  try {
    if (job.u) {
      D = make_divisor(C, qpoly(*job.u), qpoly(job.v.value_or(std::vector<Rat>{})));
    }
    for (const auto& [x, y] : job.points) D = cantor_add(C, D, embed_point(C, x, y));
  } catch (const std::exception& e) {
    throw invalid(e.what());
  }
  return D;
}

json divisor_json(const Divisor& D) {
  json u = json::array(), v = json::array();
  for (const auto& c : D.u.coeffs()) u.push_back(rat_json(c));
  for (const auto& c : D.v.coeffs()) v.push_back(rat_json(c));
  return {{"u", u}, {"v", v}};
}

json kummer_json(const KummerPoint& k) {
  json a = json::array();
  for (const auto& c : k) a.push_back(rat_json(c));
  return a;
}

PeriodMatrix make_tau(const std::array<Rat, 6>& e, long prec) {
  PeriodMatrix tau = PeriodMatrix::with_headroom(e, prec);
  if (!tau.positive_definite()) throw invalid("Im tau is not (certainly) positive definite");
  return tau;
}

const std::array<Rat, 6>& single_tau(const JobSpec& job) {
  if (job.taus.size() != 1) throw invalid("exactly one --tau is required");
  return job.taus[0];
}

json siegel_json(const SiegelReport& r) {
  return {{"S1", "not checked"},       {"S2", r.s2},
          {"S3_partial", r.s3_partial}, {"reduced", r.reduced()},
          {"in_F2_eps", r.in_F2_eps},   {"in_F2_inf", r.in_F2_inf},
          {"epsilon", rat_json(r.epsilon)}};
}

Rat default_epsilon(const JobSpec& job) { return job.epsilon.value_or(frac(1, 31)); }

json certificate_json(const BoundCertificate& c) {
  json hyps = json::array();
  for (const auto& h : c.hypotheses)
    hyps.push_back({{"name", h.name}, {"satisfied", h.satisfied}, {"detail", h.detail}});
  json consts = json::array();
  for (const auto& k : c.constants) {
    json e = {{"name", k.name}, {"formula", k.formula}, {"value", k.value}};
    e["log10"] = k.log10 ? ball_json(*k.log10) : json(nullptr);
    consts.push_back(e);
  }
  json out = {{"bound_kind", to_string(c.kind)}, {"hypotheses", hyps}, {"constants", consts},
              {"conclusive", c.conclusive()},     {"sign", c.sign},     {"note", c.note}};
  out["value_log10"] = c.value_log10 ? ball_json(*c.value_log10) : json(nullptr);
  out["value_exact"] = c.value_exact ? json(c.value_exact->str()) : json(nullptr);
  return out;
}

// ----------------------------------------------------------------- commands

json cmd_kummer(const JobSpec& job) {
  Curve C = make_curve(job);
  Divisor D = make_point(C, job);
  KummerPoint k = kummer_map(C, D);
  auto prim = primitive(k);
  json p = json::array();
  for (const auto& c : prim) p.push_back(c.get_str());
  Duplicated dup = duplicate(C, k);
  return {{"divisor", divisor_json(D)},
          {"on_theta", is_on_theta(D)},
          {"kummer", kummer_json(k)},
          {"primitive", p},
          {"quartic_value", rat_json(kummer_quartic(C, k))},
          {"duplicate", kummer_json(dup.point)},
          {"delta1", rat_json(dup.delta1)},
          {"naive_height", ball_json(naive_height(k, job.precision))}};
}

json cmd_height(const JobSpec& job) {
  Curve C = make_curve(job);
  Divisor D = make_point(C, job);
  CanonicalHeight h = canonical_height(C, D, job.radius, job.precision);
  json out = {{"divisor", divisor_json(D)},
              {"canonical_height", ball_json(h.value)},
              {"naive_height", ball_json(h.naive)},
              {"mu_archimedean", ball_json(h.mu_inf)},
              {"depth_archimedean", h.depth_inf},
              {"depth_finite", h.depth_finite},
              {"step_bound", h.step_bound}};
  KummerPoint k = normalize(kummer_map(C, D));
  Int d16 = Int(16) * C.disc();
  json places = json::array();
  for (const auto& p : bad_primes(C)) {
    json e = {{"place", p.get_str()}};
    long vd = valuation(d16, p);
    long drop = stoll_drop(C, k, p);
    // |2^4 disc|_p <= E_p <= 1 with E_p = p^-drop
    e["stoll"] = {{"drop", drop},
                  {"v_p(2^4 disc)", vd},
                  {"lower_ok", drop <= vd},
                  {"upper_ok", drop >= 0}};
    if (!is_on_theta(D)) {
      LocalHeightReport r = local_lambda_finite(C, D, p, job.depth, job.precision);
      Ball floor = -(Ball::from_mpq(frac(4 * valuation(Int(2), p) + valuation(C.disc(), p), 3),
                                    job.precision) *
                     log(Ball::from_mpz(p, job.precision)));
      e["lambda_naive"] = ball_json(r.lambda_naive);
      e["mu"] = ball_json(r.mu);
      e["lambda_canonical"] = ball_json(r.lambda_canonical);
      e["truncation_depth"] = r.truncation_depth;
      e["tail_bound"] = ball_json(r.tail_bound);
      e["finite_lower_bound"] = ball_json(floor);
      e["finite_lower_bound_holds"] = !r.lambda_canonical.certainly_lt(floor);
    } else {
      e["local_height"] = "divisor on Theta: pole";
    }
    places.push_back(e);
  }
  out["finite_places"] = places;
  return out;
}

json cmd_torsion3(const JobSpec& job) {
  Curve C = make_curve(job);
  long prec = std::max<long>(job.precision, 256);
  TorsionSolveStats st;
  auto pts = three_torsion_points(C, prec, &st);
  CBall prod = CBall::from_si(1, prec);
  for (const auto& t : pts) prod *= sqr(t.delta1);
  Int D36, a48;
  mpz_pow_ui(D36.get_mpz_t(), C.D().get_mpz_t(), 36);
  mpz_pow_ui(a48.get_mpz_t(), C.a()[5].get_mpz_t(), 48);
  Int t24;
  mpz_ui_pow_ui(t24.get_mpz_t(), 3, 24);
  Rat target = Rat(D36) / Rat(t24 * a48);
  target.canonicalize();
  json out = {{"points", pts.size()},
              {"paths", st.paths},
              {"disc", C.disc().get_str()},
              {"D", C.D().get_str()},
              {"product", cball_json(prod)},
              {"product_rel_radius", prod.re.rel_radius()},
              {"target", "3^-24 * D^36 * a5^-48"},
              {"target_value", rat_json(target)},
              {"target_contained", prod.re.contains(target) && prod.im.contains(Rat(0))}};
  json ks = json::array();
  for (const auto& t : pts) {
    json k = json::array();
    for (const auto& c : t.k) k.push_back(cball_json(c));
    ks.push_back(k);
  }
  out["kummer_points"] = ks;
  return out;
}

json cmd_theta_const(const JobSpec& job) {
  PeriodMatrix tau = make_tau(single_tau(job), job.precision);
  json out = {{"siegel", siegel_json(siegel_checks(tau, default_epsilon(job)))}};
  json list = json::array();
  for (const auto& c : even_theta_constants(tau, job.precision)) {
    json e = {{"characteristic", c.ch.str()},
              {"value", cball_json(c.value)},
              {"scaled_abs", ball_json(c.scaled_abs)},
              {"bound_name", c.bound_name}};
    e["lower_bound"] = c.lower_bound ? ball_json(*c.lower_bound) : json("n/a");
    e["holds"] = c.holds;
    list.push_back(e);
  }
  out["constants"] = list;
  return out;
}

json cmd_lambda(const JobSpec& job, int& exit_code) {
  PeriodMatrix tau = make_tau(single_tau(job), job.precision);
  json out = json::object();
  if (job.X || job.Y) {
    TorusPoint P{job.X.value_or(std::array<Rat, 2>{0, 0}), job.Y.value_or(std::array<Rat, 2>{0, 0})};
    out["Lambda"] = ball_json(big_lambda(P, tau, job.precision));
    Rat n = P.norm();
    if (n > 0 && n <= frac(1, 2)) {
      Ball lb = lambda_lower_bound(P.X, P.Y, tau, job.precision);
      out["lower_bound"] = ball_json(lb);
      out["lower_bound_holds"] = !big_lambda(P, tau, job.precision).certainly_lt(lb);
    } else {
      out["lower_bound"] = "n/a: requires 0 < ||(X,Y)|| <= 1/2";
    }
  }
  if (job.epsilon) {
    try {
      TorsionLambdaSum s = three_torsion_lambda_sum(tau, *job.epsilon, job.precision);
      out["three_torsion"] = {{"points", s.points.size()},
                              {"sum", ball_json(s.sum)},
                              {"bound", ball_json(s.bound)},
                              {"holds", s.holds}};
    } catch (const std::domain_error& e) {
      out["three_torsion"] = {{"error", e.what()}};
      exit_code = kHypothesis;
    }
  }
  if (out.empty()) throw invalid("lambda needs --X/--Y or --epsilon");
  return out;
}

json cmd_faltings(const JobSpec& job) {
  json out = json::object();
  if (job.taus.size() == 1) {
    PeriodMatrix tau = make_tau(job.taus[0], job.precision);
    SiegelReport rep = siegel_checks(tau, default_epsilon(job));
    out["siegel"] = siegel_json(rep);
    out["arch_term"] = ball_json(faltings_arch_term(tau, job.precision));
    out["arch_term_with_det"] = ball_json(faltings_arch_term_full(tau, job.precision));
    out["arch_majorant"] =
        rep.in_F2_inf ? ball_json(faltings_arch_majorant(tau, job.precision)) : json("n/a");
  } else if (job.taus.size() > 1) {
    throw invalid("faltings takes at most one --tau");
  }
  if (job.tr && job.logd) {
    FaltingsReport r = faltings_upper_bound(*job.tr, *job.logd, job.d, job.precision);
    out["upper_bound"] = {{"c3", ball_json(r.c3)},
                          {"c4", ball_json(r.c4)},
                          {"c3_formula", r.c3_formula},
                          {"c4_formula", r.c4_formula},
                          {"arch_term", ball_json(r.arch_term)},
                          {"finite_term_upper", ball_json(r.finite_term_upper)},
                          {"h_prime_upper", ball_json(r.h_prime_upper)}};
    out["elliptic_upper"] = ball_json(elliptic_faltings_upper(*job.tr, *job.logd, job.d, job.precision));
    out["elliptic_height_lower"] =
        ball_json(elliptic_height_lower(*job.tr, *job.logd, job.d, job.m, job.precision));
  }
  if (job.elliptic_tau) {
    CBall t = CBall::from_mpq((*job.elliptic_tau)[0], (*job.elliptic_tau)[1], job.precision);
    EllipticDelta e = elliptic_delta(t, job.precision);
    Ball two_pi = Ball::from_si(2, job.precision) * Ball::pi(job.precision);
    Ball rhs = two_pi * t.im + Ball::from_si(12, job.precision) * log(two_pi) +
               Ball::from_mpq(frac(1, 9), job.precision);
    out["elliptic_delta"] = {{"delta", cball_json(e.delta)},
                             {"A_bound", ball_json(e.A_bound)},
                             {"A_bound_le_1_9", e.A_bound.certainly_le(Ball::from_mpq(frac(1, 9), job.precision))},
                             {"neg_log_abs", ball_json(e.neg_log_abs)},
                             {"neg_log_abs_bound", ball_json(rhs)},
                             {"terms", e.terms}};
  }
  if (out.empty()) throw invalid("faltings needs --tau, --tr/--logd or --elliptic-tau");
  return out;
}

json cmd_check_siegel(const JobSpec& job) {
  PeriodMatrix tau = make_tau(single_tau(job), job.precision);
  return siegel_json(siegel_checks(tau, default_epsilon(job)));
}

CountingInputs counting_inputs(const JobSpec& job, std::optional<double> logd) {
  CountingInputs in;
  in.tr_inf = job.tr;
  in.log_d = logd;
  for (const auto& t : job.taus)
    in.siegel_reports.push_back(siegel_checks(make_tau(t, job.precision), default_epsilon(job)));
  if (!in.tr_inf && !job.taus.empty()) {
    double s = 0;
    for (const auto& t : job.taus) s += Rat(t[1] + t[5]).get_d();
    in.tr_inf = s;
  }
  return in;
}

std::optional<double> log_d(const JobSpec& job) {
  if (job.logd) return job.logd;
  if (job.curve) {
    Curve C = make_curve(job);
    Int a = abs(C.D());
    return std::log(a.get_d());
  }
  return std::nullopt;
}

json cmd_certify(const JobSpec& job, int& exit_code) {
  json out = {{"kind", job.kind}};
  BoundCertificate c;
  if (job.kind == "torsion") {
    c = torsion_bound(job.d, counting_inputs(job, log_d(job)), job.precision);
  } else if (job.kind == "rational-points") {
    c = rational_points_bound(job.d, job.rank, counting_inputs(job, log_d(job)), job.precision);
    c.hypotheses.push_back({"good reduction at 2 (rational-points corollary)", c.conclusive(),
                            "user-asserted, not checked"});
  } else if (job.kind == "height") {
    CountingInputs in = counting_inputs(job, log_d(job));
    if (!in.tr_inf || !in.log_d) throw invalid("certify height needs --tr (or --tau) and --logd (or --curve)");
    try {
      c = jacobian_lower_bound(job.d, *in.tr_inf, *in.log_d, in.siegel_reports, job.product,
                               job.precision);
    } catch (const RefusedError& e) {
      throw CliError(kHypothesis, "refused", e.what());
    }
    Int range;
    mpz_ui_pow_ui(range.get_mpz_t(), static_cast<unsigned long>(job.M),
                  static_cast<unsigned long>(4 * job.m));
    out["pigeonhole"] = {{"M", job.M}, {"range_formula", "2*M^(4*m)"},
                         {"range", Int(2 * range).get_str()}};
  } else if (job.kind == "product") {
    if (!job.tr || !job.logd || !job.tr2 || !job.logd2)
      throw invalid("certify product needs --tr, --logd, --tr2, --logd2");
    c = product_case_bound(*job.tr, *job.logd, *job.tr2, *job.logd2, job.d, job.m, job.precision);
  } else if (job.kind == "genus2") {
    Genus2Constant g = genus2_constant(job.d, job.precision);
    Ball rounded = Ball::from_mpq(g.rounded, job.precision);
    out["coefficient"] = ball_json(g.coefficient);
    out["formula"] = "(c1-c2/64)*(c3+c4/64)^-1 * 240^(8*3^16*d)";
    out["rounded"] = rat_json(g.rounded);
    out["exponent"] = g.exponent.get_str();
    out["rounded_below_exact"] = rounded.certainly_le(g.coefficient);
    return out;
  } else {
    throw invalid("certify kind must be torsion, rational-points, height, product or genus2");
  }
  out["certificate"] = certificate_json(c);
  if (!c.conclusive()) exit_code = kHypothesis;
  return out;
}

}  // namespace

// ------------------------------------------------------------------ parsing

Rat parse_rat(const std::string& s0) {
  std::string s = trim(s0);
  static const std::regex frac_re(R"(^([+-]?\d+)(?:/(\d+))?$)");
  static const std::regex dec_re(R"(^([+-]?)(\d*)(?:\.(\d*))?(?:[eE]([+-]?\d+))?$)");
  std::smatch m;
  if (std::regex_match(s, m, frac_re)) {
    Int n(m[1].str()[0] == '+' ? m[1].str().substr(1) : m[1].str(), 10);
    Int d = m[2].matched ? Int(m[2].str(), 10) : Int(1);
    if (d == 0) throw invalid("zero denominator in '" + s0 + "'");
    return frac(n, d);
  }
  if (std::regex_match(s, m, dec_re) && (m[2].length() + m[3].length()) > 0) {
    std::string digits = m[2].str() + m[3].str();
    long e = m[4].matched ? std::stol(m[4].str()) : 0;
    e -= static_cast<long>(m[3].length());
    if (std::labs(e) > 100000) throw invalid("exponent out of range in '" + s0 + "'");
    Int n(digits.empty() ? "0" : digits, 10), p;
    mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(e)));
    Rat q = e >= 0 ? Rat(n * p) : frac(n, p);
    return m[1].str() == "-" ? Rat(-q) : q;
  }
  throw invalid("not a rational number: '" + s0 + "'");
}

std::vector<Rat> parse_rat_list(const std::string& s0) {
  std::string s = trim(s0);
  if (!s.empty() && s.front() == '[') {
    if (s.back() != ']') throw invalid("unbalanced brackets in '" + s0 + "'");
    s = s.substr(1, s.size() - 2);
  }
  std::vector<Rat> out;
  if (trim(s).empty()) return out;
  size_t pos = 0;
  for (;;) {
    size_t c = s.find(',', pos);
    out.push_back(parse_rat(s.substr(pos, c == std::string::npos ? std::string::npos : c - pos)));
    if (c == std::string::npos) break;
    pos = c + 1;
  }
  return out;
}

std::vector<Int> parse_int_list(const std::string& s) {
  std::vector<Int> out;
  for (const auto& q : parse_rat_list(s)) {
    if (q.get_den() != 1) throw invalid("expected integers in '" + s + "'");
    out.push_back(q.get_num());
  }
  return out;
}

JobSpec job_from_json(const json& j) {
  if (!j.is_object()) throw invalid("job file must hold a JSON object");
  JobSpec job;
  try {
    if (j.contains("command")) job.command = j.at("command").get<std::string>();
    if (j.contains("kind")) job.kind = j.at("kind").get<std::string>();
    if (j.contains("curve")) {
      const auto& c = j.at("curve");
      if (!c.is_array() || c.size() != 6) throw invalid("curve: expected [a0,...,a5]");
      std::array<Int, 6> a;
      for (size_t i = 0; i < 6; ++i) a[i] = int_from_json(c[i]);
      job.curve = a;
    }
    if (j.contains("points"))
      for (const auto& p : j.at("points")) {
        auto xy = rat_array<2>(p, "points");
        job.points.emplace_back(xy[0], xy[1]);
      }
    auto rat_vec = [](const json& a) {
      std::vector<Rat> v;
      for (const auto& e : a) v.push_back(rat_from_json(e));
      return v;
    };
    if (j.contains("u")) job.u = rat_vec(j.at("u"));
    if (j.contains("v")) job.v = rat_vec(j.at("v"));
    if (j.contains("tau")) {
      const auto& t = j.at("tau");
      if (t.is_array() && !t.empty() && t[0].is_array())
        for (const auto& e : t) job.taus.push_back(rat_array<6>(e, "tau"));
      else
        job.taus.push_back(rat_array<6>(t, "tau"));
    }
    if (j.contains("X")) job.X = rat_array<2>(j.at("X"), "X");
    if (j.contains("Y")) job.Y = rat_array<2>(j.at("Y"), "Y");
    if (j.contains("elliptic_tau")) job.elliptic_tau = rat_array<2>(j.at("elliptic_tau"), "elliptic_tau");
    if (j.contains("epsilon")) job.epsilon = rat_from_json(j.at("epsilon"));
    if (j.contains("precision")) job.precision = j.at("precision").get<long>();
    if (j.contains("depth")) job.depth = j.at("depth").get<int>();
    if (j.contains("M")) job.M = j.at("M").get<long>();
    if (j.contains("radius")) job.radius = j.at("radius").get<double>();
    if (j.contains("d")) job.d = j.at("d").get<long>();
    if (j.contains("m")) job.m = j.at("m").get<long>();
    if (j.contains("rank")) job.rank = j.at("rank").get<long>();
    if (j.contains("tr")) job.tr = j.at("tr").get<double>();
    if (j.contains("logd")) job.logd = j.at("logd").get<double>();
    if (j.contains("tr2")) job.tr2 = j.at("tr2").get<double>();
    if (j.contains("logd2")) job.logd2 = j.at("logd2").get<double>();
    if (j.contains("product")) job.product = j.at("product").get<bool>();
  } catch (const json::exception& e) {
    throw invalid(std::string("job file: ") + e.what());
  }
  return job;
}

void validate(const JobSpec& job) {
  static const std::vector<std::string> commands = {"height", "kummer", "theta-const", "lambda",
                                                    "torsion3", "faltings", "certify", "check-siegel"};
  if (std::find(commands.begin(), commands.end(), job.command) == commands.end())
    throw invalid("unknown command '" + job.command + "'");
  if (job.precision < 53) throw invalid("precision must be at least 53 bits");
  if (job.precision > 65536) throw invalid("precision must be at most 65536 bits");
  if (job.depth < 0 || job.depth > 200) throw invalid("depth must be in 0..200");
  if (job.M < 2) throw invalid("M must be at least 2");
  if (job.d < 1 || job.m < 1) throw invalid("d and m must be positive");
  if (job.rank < 0) throw invalid("rank must be nonnegative");
  if (!(job.radius > 0)) throw invalid("radius must be positive");
  if (job.epsilon && *job.epsilon <= 0) throw invalid("epsilon must be positive");
  for (auto x : {job.tr, job.logd, job.tr2, job.logd2})
    if (x && (!std::isfinite(*x) || *x < 0)) throw invalid("tr/logd inputs must be finite and nonnegative");
  if (job.command == "certify" && job.kind.empty()) throw invalid("certify needs a kind");
}

json error_report(const std::string& command, int exit_code, const std::string& code,
                  const std::string& message) {
  return {{"schema", kSchema},
          {"command", command},
          {"ok", false},
          {"exit_code", exit_code},
          {"error", {{"code", code}, {"message", message}}}};
}

json run(const JobSpec& job, int& exit_code) {
  validate(job);
  exit_code = kOk;
  json result;
  if (job.command == "height") result = cmd_height(job);
  else if (job.command == "kummer") result = cmd_kummer(job);
  else if (job.command == "theta-const") result = cmd_theta_const(job);
  else if (job.command == "lambda") result = cmd_lambda(job, exit_code);
  else if (job.command == "torsion3") result = cmd_torsion3(job);
  else if (job.command == "faltings") result = cmd_faltings(job);
  else if (job.command == "certify") result = cmd_certify(job, exit_code);
  else result = cmd_check_siegel(job);
  json out = {{"schema", kSchema}, {"command", job.command}, {"ok", true},
              {"exit_code", exit_code}, {"precision", job.precision}, {"result", result}};
  if (!job.kind.empty()) out["kind"] = job.kind;
  return out;
}

json run_safely(const JobSpec& job, int& exit_code) {
  try {
    return run(job, exit_code);
  } catch (const CliError& e) {
    exit_code = e.exit_code;
    return error_report(job.command, e.exit_code, e.code, e.what());
  } catch (const PrecisionError& e) {
    exit_code = kPrecision;
    return error_report(job.command, kPrecision, "precision", e.what());
  } catch (const DivisorProximityError& e) {
    exit_code = kPrecision;
    return error_report(job.command, kPrecision, "divisor_proximity", e.what());
  } catch (const DegenerateThetaError& e) {
    exit_code = kHypothesis;
    return error_report(job.command, kHypothesis, "degenerate_theta", e.what());
  } catch (const RefusedError& e) {
    exit_code = kHypothesis;
    return error_report(job.command, kHypothesis, "refused", e.what());
  } catch (const std::domain_error& e) {
    exit_code = kValidation;
    return error_report(job.command, kValidation, "domain", e.what());
  } catch (const std::exception& e) {
    exit_code = 1;
    return error_report(job.command, 1, "internal", e.what());
  }
}

}  // namespace ahcli
