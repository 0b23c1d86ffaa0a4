#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "cli.hpp"

int main(int argc, char** argv) {
  using namespace ahcli;
  CLI::App app{"Canonical heights and explicit bounds on genus-2 Jacobians"};
  app.set_version_flag("--version", std::string("abelheight ") + kSchema);

  std::string command, kind, curve, u, v, X, Y, etau, eps, json_file;
  std::vector<std::string> points, taus;
  long precision = 128, M = 240, d = 1, m = 1, rank = 0;
  int depth = 16;
  double radius = 1e-10, tr = 0, logd = 0, tr2 = 0, logd2 = 0;
  bool product = false;

  app.add_option("command", command,
                 "height | kummer | theta-const | lambda | torsion3 | faltings | certify | check-siegel");
  app.add_option("kind", kind, "certify: torsion | rational-points | height | product | genus2");
  app.add_option("--json", json_file, "JSON job file; flags given on the command line override it");
  app.add_option("--curve", curve, "[a0,a1,a2,a3,a4,a5] for y^2 = a5 x^5 + ... + a0");
  app.add_option("--point", points, "x,y of a point on the curve (repeatable; points are summed)");
  app.add_option("--u", u, "Mumford u, ascending coefficients");
  app.add_option("--v", v, "Mumford v, ascending coefficients");
  app.add_option("--tau", taus, "Re t11,Im t11,Re t12,Im t12,Re t22,Im t22 (repeatable for certify)");
  app.add_option("--X", X, "x1,x2");
  app.add_option("--Y", Y, "y1,y2");
  app.add_option("--elliptic-tau", etau, "Re tau,Im tau");
  app.add_option("--epsilon", eps, "epsilon as a rational");
  app.add_option("--precision", precision, "working precision in bits (>= 53)");
  app.add_option("--depth", depth, "truncation depth for finite local heights");
  app.add_option("--M", M, "pigeonhole box count per unit (default 240)");
  app.add_option("--radius", radius, "target radius of the canonical height");
  app.add_option("--d", d, "degree of the base field");
  app.add_option("--m", m, "number of archimedean places");
  app.add_option("--rank", rank, "Mordell-Weil rank");
  app.add_option("--tr", tr, "Tr_inf (first factor for certify product)");
  app.add_option("--logd", logd, "log N(D) (first factor for certify product)");
  app.add_option("--tr2", tr2, "Tr_inf of the second elliptic factor");
  app.add_option("--logd2", logd2, "log N(Delta) of the second elliptic factor");
  app.add_flag("--product", product, "the Jacobian is a product of elliptic curves");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cout << error_report(command, kValidation, "usage", e.what()).dump(2) << "\n";
    return kValidation;
  }

  int code = kOk;
  JobSpec job;
  try {
    if (!json_file.empty()) {
      std::ifstream in(json_file);
      if (!in) throw CliError(kValidation, "validation", "cannot read job file " + json_file);
      json j;
      try {
        j = json::parse(in);
      } catch (const json::exception& e) {
        throw CliError(kValidation, "validation", std::string("job file: ") + e.what());
      }
      job = job_from_json(j);
    }
    auto set = [&](const char* name) { return app.count(name) > 0; };
    if (!command.empty()) job.command = command;
    if (!kind.empty()) job.kind = kind;
    if (set("--curve")) {
      auto a = parse_int_list(curve);
      if (a.size() != 6) throw CliError(kValidation, "validation", "--curve needs six integers");
      job.curve = std::array<Int, 6>{a[0], a[1], a[2], a[3], a[4], a[5]};
    }
    if (set("--point")) {
      job.points.clear();
      for (const auto& p : points) {
        auto xy = parse_rat_list(p);
        if (xy.size() != 2) throw CliError(kValidation, "validation", "--point needs x,y");
        job.points.emplace_back(xy[0], xy[1]);
      }
    }
    if (set("--u")) job.u = parse_rat_list(u);
    if (set("--v")) job.v = parse_rat_list(v);
    if (set("--tau")) {
      job.taus.clear();
      for (const auto& t : taus) {
        auto e = parse_rat_list(t);
        if (e.size() != 6) throw CliError(kValidation, "validation", "--tau needs six reals");
        job.taus.push_back({e[0], e[1], e[2], e[3], e[4], e[5]});
      }
    }
    auto pair = [](const std::string& s, const char* what) {
      auto e = parse_rat_list(s);
      if (e.size() != 2) throw CliError(kValidation, "validation", std::string(what) + " needs two reals");
      return std::array<Rat, 2>{e[0], e[1]};
    };
    if (set("--X")) job.X = pair(X, "--X");
    if (set("--Y")) job.Y = pair(Y, "--Y");
    if (set("--elliptic-tau")) job.elliptic_tau = pair(etau, "--elliptic-tau");
    if (set("--epsilon")) job.epsilon = parse_rat(eps);
    if (set("--precision")) job.precision = precision;
    if (set("--depth")) job.depth = depth;
    if (set("--M")) job.M = M;
    if (set("--radius")) job.radius = radius;
    if (set("--d")) job.d = d;
    if (set("--m")) job.m = m;
    if (set("--rank")) job.rank = rank;
    if (set("--tr")) job.tr = tr;
    if (set("--logd")) job.logd = logd;
    if (set("--tr2")) job.tr2 = tr2;
    if (set("--logd2")) job.logd2 = logd2;
    if (set("--product")) job.product = product;
  } catch (const CliError& e) {
    std::cout << error_report(job.command.empty() ? command : job.command, e.exit_code, e.code, e.what())
                     .dump(2)
              << "\n";
    return e.exit_code;
  }

  json report = run_safely(job, code);
  std::cout << report.dump(2) << "\n";
  return code;
}
