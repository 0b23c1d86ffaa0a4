#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <regex>
#include <string>
#include <sys/wait.h>

#include "abelheight/jacobian.hpp"
#include "abelheight/kummer.hpp"
#include "cli.hpp"

using ahcli::json;

namespace {

struct CliRun {
  int code = -1;
  std::string out;
  json doc;
};

CliRun run_cli(const std::string& args) {
  std::string cmd = std::string(AH_CLI_BINARY) + " " + args + " 2>/dev/null";
  FILE* f = popen(cmd.c_str(), "r");
  CliRun r;
  if (!f) return r;
  std::array<char, 4096> buf;
  size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), f)) > 0) r.out.append(buf.data(), n);
  int st = pclose(f);
  r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  r.doc = json::parse(r.out, nullptr, false);
  return r;
}

const std::regex kDecimal(R"(^[+-]?\d+(\.\d+)?([eE][+-]?\d+)?$)");

// Walks a report and checks every ball-shaped object.
void check_balls(const json& j, const std::string& path) {
  if (j.is_object()) {
    if (j.contains("mid") && j.contains("rad")) {
      ASSERT_TRUE(j["mid"].is_string()) << path;
      ASSERT_TRUE(j["rad"].is_string()) << path;
      EXPECT_TRUE(std::regex_match(j["mid"].get<std::string>(), kDecimal)) << path;
      EXPECT_TRUE(std::regex_match(j["rad"].get<std::string>(), kDecimal)) << path;
      EXPECT_GE(std::stod(j["rad"].get<std::string>()), 0.0) << path;
      ASSERT_TRUE(j.contains("prec") && j["prec"].is_number_integer()) << path;
    }
    for (auto it = j.begin(); it != j.end(); ++it) check_balls(it.value(), path + "/" + it.key());
  } else if (j.is_array()) {
    for (size_t i = 0; i < j.size(); ++i) check_balls(j[i], path + "/" + std::to_string(i));
  }
}

// abelheight-report/1: top-level fields, then either a result or an error object.
void check_schema(const CliRun& r) {
  ASSERT_FALSE(r.doc.is_discarded()) << r.out;
  const json& d = r.doc;
  ASSERT_TRUE(d.is_object());
  EXPECT_EQ(d.at("schema"), ahcli::kSchema);
  ASSERT_TRUE(d.at("command").is_string());
  ASSERT_TRUE(d.at("ok").is_boolean());
  EXPECT_EQ(d.at("exit_code").get<int>(), r.code);
  if (d["ok"].get<bool>()) {
    ASSERT_TRUE(d.contains("result"));
    ASSERT_TRUE(d.at("precision").is_number_integer());
  } else {
    ASSERT_TRUE(d.at("error").at("code").is_string());
    ASSERT_TRUE(d.at("error").at("message").is_string());
    EXPECT_NE(r.code, 0);
  }
  check_balls(d, "");
  EXPECT_EQ(json::parse(d.dump()), d);
}

std::string write_job(const json& j, const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("abelheight_" + name + ".json");
  std::ofstream(p) << j.dump();
  return p.string();
}

const char* kQuinticPlusOne = "--curve [1,0,0,0,0,1]";

}  // namespace

TEST(Cli, CommandsFollowSchemaAndAreDeterministic) {
  std::vector<std::string> jobs = {
      std::string("height ") + kQuinticPlusOne + " --point 0,1 --point -1,0",
      std::string("kummer ") + kQuinticPlusOne + " --point 0,1 --point -1,0",
      "theta-const --tau 0,31,0,1,0,31",
      "lambda --tau 1/10,2,0,1/2,0,3 --X 1/7,0 --Y 0,1/5",
      "faltings --tau 0,31,0,1,0,31 --tr 62 --logd 1 --elliptic-tau 0,1",
      "check-siegel --tau 0,31,0,1,0,31",
      "certify genus2",
      "certify product --tr 1 --logd 7 --tr2 2 --logd2 1",
      "certify height --tr 200 --logd 1 --tau 0,31,0,1,0,31 --epsilon 1/31",
  };
  for (const auto& a : jobs) {
    SCOPED_TRACE(a);
    CliRun r1 = run_cli(a), r2 = run_cli(a);
    check_schema(r1);
    EXPECT_EQ(r1.code, 0);
    EXPECT_TRUE(r1.doc["ok"].get<bool>());
    EXPECT_EQ(r1.out, r2.out);
  }
}

TEST(Cli, HeightMatchesLibrary) {
  struct Case {
    std::array<long, 6> a;
    std::vector<std::pair<long, long>> pts;
  };
  std::vector<Case> cases = {{{1, 0, 0, 0, 0, 1}, {{0, 1}, {-1, 0}}},
                             {{1, -1, 0, 0, 0, 1}, {{0, 1}, {1, 1}}},
                             {{4, 0, 1, 0, 0, 1}, {{0, 2}, {-1, 2}}}};
  for (const auto& c : cases) {
    std::string curve = "[";
    std::array<ah::Int, 6> a;
    for (int i = 0; i < 6; ++i) {
      curve += std::to_string(c.a[i]) + (i < 5 ? "," : "]");
      a[i] = c.a[i];
    }
    std::string args = "height --curve " + curve;
    ah::Curve C(a);
    ah::Divisor D = ah::zero_divisor();
    for (auto [x, y] : c.pts) {
      args += " --point " + std::to_string(x) + "," + std::to_string(y);
      D = ah::cantor_add(C, D, ah::embed_point(C, ah::Rat(x), ah::Rat(y)));
    }
    SCOPED_TRACE(args);
    CliRun r = run_cli(args);
    check_schema(r);
    ASSERT_EQ(r.code, 0);
    ah::CanonicalHeight h = ah::canonical_height(C, D, 1e-10, 128);
    const json& ch = r.doc["result"]["canonical_height"];
    EXPECT_EQ(ch["mid"], h.value.mid_str());
    EXPECT_EQ(ch["rad"], h.value.rad_str());
    for (const auto& p : r.doc["result"]["finite_places"]) {
      EXPECT_TRUE(p["stoll"]["lower_ok"].get<bool>());
      EXPECT_TRUE(p["stoll"]["upper_ok"].get<bool>());
      if (p.contains("finite_lower_bound_holds")) EXPECT_TRUE(p["finite_lower_bound_holds"].get<bool>());
    }
  }
}

TEST(Cli, TorsionProductOnQuinticMinusOne) {
  CliRun r = run_cli("torsion3 --curve [-1,0,0,0,0,1] --precision 256");
  check_schema(r);
  ASSERT_EQ(r.code, 0);
  const json& res = r.doc["result"];
  EXPECT_EQ(res["points"], 40);
  EXPECT_EQ(res["disc"], "3125");
  EXPECT_TRUE(res["target_contained"].get<bool>());
  EXPECT_LE(res["product_rel_radius"].get<double>(), 1e-20);
  // 2^288 3^-24 5^180
  ah::Int num, den, f5;
  mpz_ui_pow_ui(num.get_mpz_t(), 2, 288);
  mpz_ui_pow_ui(f5.get_mpz_t(), 5, 180);
  mpz_ui_pow_ui(den.get_mpz_t(), 3, 24);
  EXPECT_EQ(res["target_value"], ah::frac(num * f5, den).get_str());
}

TEST(Cli, CertifyTorsionExponent) {
  CliRun r = run_cli("certify torsion --d 1");
  check_schema(r);
  EXPECT_EQ(r.code, ahcli::kHypothesis);
  const json& c = r.doc["result"]["certificate"];
  EXPECT_FALSE(c["conclusive"].get<bool>());
  bool found = false;
  for (const auto& k : c["constants"])
    if (k["name"] == "exponent") {
      EXPECT_EQ(k["value"], "688747536");
      found = true;
    }
  EXPECT_TRUE(found);

  CliRun ok = run_cli("certify torsion --d 1 --tr 640 --logd 10 --tau 0,31,0,1,0,31");
  check_schema(ok);
  EXPECT_EQ(ok.code, 0);
  EXPECT_TRUE(ok.doc["result"]["certificate"]["conclusive"].get<bool>());
}

TEST(Cli, ExitCodesAndErrorObjects) {
  struct Case {
    std::string args;
    int code;
    std::string err;
  };
  std::vector<Case> cases = {
      {"frobnicate", 2, "validation"},
      {"height --curve [1,2,3]", 2, "validation"},
      {"height --curve [0,0,0,0,0,1] --point 0,0", 2, "validation"},
      {"kummer --curve [1,0,0,0,0,1] --point 2,2", 2, "validation"},
      {"theta-const --tau 0,31,0,1,0,31 --precision 40", 2, "validation"},
      {"theta-const --tau 0,1,0,2,0,1", 2, "validation"},
      {"lambda --tau 0,31,0,1,0,31 --epsilon -1", 2, "validation"},
      {"certify height --tr 200 --logd 1 --tau 0,31,0,1,0,31 --product", 4, "refused"},
      {"faltings --tau 0,31,0,0,0,31", 4, "degenerate_theta"},
      {"lambda --tau 0,2,0,1,0,3 --X 0,0 --Y 0,0", 3, "divisor_proximity"},
      {"--bogus-flag", 2, "usage"},
  };
  for (const auto& c : cases) {
    SCOPED_TRACE(c.args);
    CliRun r = run_cli(c.args);
    check_schema(r);
    EXPECT_EQ(r.code, c.code);
    EXPECT_FALSE(r.doc["ok"].get<bool>());
    EXPECT_EQ(r.doc["error"]["code"], c.err);
  }
  // inconclusive certificates are printed with exit code 4
  CliRun r = run_cli("certify height --tr 200 --logd 1");
  check_schema(r);
  EXPECT_EQ(r.code, 4);
  EXPECT_TRUE(r.doc["ok"].get<bool>());
  EXPECT_FALSE(r.doc["result"]["certificate"]["conclusive"].get<bool>());
}

TEST(Cli, JobFileAndFlagOverride) {
  json job = {{"command", "check-siegel"}, {"tau", {"0", "31", "0", "1", "0", "31"}}, {"epsilon", "1/31"}};
  std::string path = write_job(job, "siegel");
  CliRun a = run_cli("--json " + path);
  CliRun b = run_cli("check-siegel --tau 0,31,0,1,0,31 --epsilon 1/31");
  check_schema(a);
  EXPECT_EQ(a.out, b.out);
  CliRun c = run_cli("--json " + path + " --tau 0,31,0,0,0,31");
  check_schema(c);
  EXPECT_FALSE(c.doc["result"]["in_F2_eps"].get<bool>());
  CliRun bad = run_cli("--json " + write_job(json::array({1, 2}), "bad"));
  check_schema(bad);
  EXPECT_EQ(bad.code, 2);
  std::filesystem::remove(path);
}

TEST(Cli, ParsingIsExact) {
  EXPECT_EQ(ahcli::parse_rat("0.125"), ah::frac(1, 8));
  EXPECT_EQ(ahcli::parse_rat("010"), ah::Rat(10));
  EXPECT_EQ(ahcli::parse_rat("-007/010"), ah::frac(-7, 10));
  EXPECT_EQ(ahcli::parse_rat("-3/4"), ah::frac(-3, 4));
  EXPECT_EQ(ahcli::parse_rat("6/8"), ah::frac(3, 4));
  EXPECT_EQ(ahcli::parse_rat("1e-3"), ah::frac(1, 1000));
  EXPECT_EQ(ahcli::parse_rat("2.5E2"), ah::Rat(250));
  EXPECT_THROW(ahcli::parse_rat("1/0"), ahcli::CliError);
  EXPECT_THROW(ahcli::parse_rat("abc"), ahcli::CliError);
  EXPECT_EQ(ahcli::parse_rat_list("[1, 1/2,0.5]").size(), 3u);
  EXPECT_THROW(ahcli::parse_int_list("1,1/2"), ahcli::CliError);
}
