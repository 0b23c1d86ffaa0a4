// Job parsing and dispatch for the abelheight command-line tool.
#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "abelheight/exact.hpp"
#include "json.hpp"

namespace ahcli {

using ah::Int;
using ah::Rat;
using nlohmann::json;

inline constexpr const char* kSchema = "abelheight-report/1";

enum ExitCode { kOk = 0, kValidation = 2, kPrecision = 3, kHypothesis = 4 };

struct CliError : std::runtime_error {
  int exit_code;
  std::string code;
  CliError(int e, std::string c, const std::string& msg)
      : std::runtime_error(msg), exit_code(e), code(std::move(c)) {}
};

struct JobSpec {
  std::string command;
  std::string kind;  // certify: torsion, rational-points, height, product, genus2
  std::optional<std::array<Int, 6>> curve;
  std::vector<std::pair<Rat, Rat>> points;  // affine points, summed
  std::optional<std::vector<Rat>> u, v;     // Mumford pair, ascending coefficients
  std::vector<std::array<Rat, 6>> taus;     // one per archimedean place
  std::optional<std::array<Rat, 2>> X, Y;
  std::optional<std::array<Rat, 2>> elliptic_tau;  // (Re, Im)
  std::optional<Rat> epsilon;
  long precision = 128;
  int depth = 16;
  long M = 240;
  double radius = 1e-10;
  long d = 1, m = 1, rank = 0;
  std::optional<double> tr, logd, tr2, logd2;
  bool product = false;
};

// "7", "-3/4", "0.125", "1e-3" as exact rationals.
Rat parse_rat(const std::string& s);
// "[a,b,c]" or "a,b,c".
std::vector<Rat> parse_rat_list(const std::string& s);
std::vector<Int> parse_int_list(const std::string& s);

JobSpec job_from_json(const json& j);
void validate(const JobSpec& job);

// Runs the job; the report is the single JSON document to print.
json run(const JobSpec& job, int& exit_code);
// Wraps run: every failure becomes an error report with its exit code.
json run_safely(const JobSpec& job, int& exit_code);
json error_report(const std::string& command, int exit_code, const std::string& code,
                  const std::string& message);

}  // namespace ahcli
