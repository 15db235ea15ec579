#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

// End-to-end checks of the installed binary; the test runner passes its
// location through SOLITONLAB_BIN.

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct ExecResult {
  int exit_code = -1;
  std::string stdout_text;
  std::string stderr_text;
};

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

const char* binary() {
  const char* bin = std::getenv("SOLITONLAB_BIN");
  REQUIRE_MESSAGE(bin != nullptr,
                  "SOLITONLAB_BIN must point at the solitonlab binary");
  return bin;
}

fs::path scratch_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() /
                 ("solitonlab_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

ExecResult run_cli(const std::string& args, int tag) {
  const fs::path out = scratch_dir() / ("stdout_" + std::to_string(tag));
  const fs::path err = scratch_dir() / ("stderr_" + std::to_string(tag));
  const std::string cmd = std::string(binary()) + " " + args + " > " +
                          out.string() + " 2> " + err.string();
  const int status = std::system(cmd.c_str());
  ExecResult res;
  res.exit_code = (status == -1) ? -1 : WEXITSTATUS(status);
  res.stdout_text = slurp(out);
  res.stderr_text = slurp(err);
  return res;
}

}  // namespace

TEST_CASE("rigidity-scan: A = 0 reports a constant steady lambda") {
  const ExecResult res = run_cli("rigidity-scan --n 4 --A 0 --k2 1", 1);
  REQUIRE(res.exit_code == 0);
  const json report = json::parse(res.stdout_text);
  CHECK(report["command"] == "rigidity-scan");
  CHECK(report["verdicts"][0]["is_constant"] == true);
  CHECK(report["verdicts"][0]["forced_lambda"] == 0.0);
  CHECK(report["verdicts"][0]["pass"] == true);
  CHECK(report["version"] == "0.1.0");
}

TEST_CASE("rigidity-scan: A = 1 shows the non-constant profile and still passes") {
  const ExecResult res = run_cli("rigidity-scan --n 4 --A 1 --k2 1", 2);
  REQUIRE(res.exit_code == 0);
  const json report = json::parse(res.stdout_text);
  CHECK(report["verdicts"][0]["is_constant"] == false);
  CHECK(report["verdicts"][0]["forced_lambda"].is_null());
  CHECK(report["verdicts"][0]["lambda_spread"].get<double>() > 1e-3);
}

TEST_CASE("completeness: family vs cylinder closed forms") {
  const ExecResult res =
      run_cli("completeness --n 4 --A 1 --k2 1 --reference cylinder", 3);
  REQUIRE(res.exit_code == 0);
  const json report = json::parse(res.stdout_text);
  const json& verdict = report["verdicts"][0];
  CHECK(verdict["certified"] == true);
  CHECK(std::abs(verdict["bound_c"].get<double>() - 2.0) < 1e-9 * 2.0);
  CHECK(std::abs(verdict["minimizer_r"].get<double>() - 1.0) < 1e-6);
}

TEST_CASE("completeness: A = 0 is not certified and exits nonzero") {
  const ExecResult res =
      run_cli("completeness --n 4 --A 0 --k2 1 --reference cylinder", 4);
  CHECK(res.exit_code == 1);
  const json report = json::parse(res.stdout_text);
  CHECK(report["verdicts"][0]["certified"] == false);
  CHECK(report["verdicts"][0]["infimum_location"] == "r->inf");
}

TEST_CASE("curvature: singular grid points are skipped and reported") {
  const ExecResult res = run_cli(
      "curvature --profile family --n 4 --A -1 --k2 1 --rmin 0.5 --rmax 2 "
      "--count 8",
      5);
  REQUIRE(res.exit_code == 0);
  const json report = json::parse(res.stdout_text);
  CHECK(report["verdicts"][0]["pass"] == true);
  CHECK(report["verdicts"][0]["max_abs_K"].get<double>() < 1e-8);
  CHECK(report["errors"].size() >= 3);  // r >= 1 lies outside the domain
  for (const auto& row : report["values"]) {
    CHECK(row["r"].get<double>() < 1.0);
  }
}

TEST_CASE("verify-soliton: the steady flat member passes at 1e-10") {
  const ExecResult res = run_cli(
      "verify-soliton --n 5 --A 0 --k2 3 --rho 0.5 --lambda 0 --rmin 0.5 "
      "--rmax 10 --count 6",
      6);
  REQUIRE(res.exit_code == 0);
  const json report = json::parse(res.stdout_text);
  CHECK(report["verdicts"][0]["pass"] == true);
  CHECK(report["verdicts"][0]["pde_diag_max"].get<double>() < 1e-10);
}

TEST_CASE("verify-soliton: a shifted lambda fails") {
  const ExecResult res = run_cli(
      "verify-soliton --n 4 --A 0 --k2 1 --rho 0 --lambda 1 --count 4", 7);
  CHECK(res.exit_code == 1);
  const json report = json::parse(res.stdout_text);
  CHECK(report["verdicts"][0]["pass"] == false);
}

TEST_CASE("family: singular set round-trips through the report") {
  const ExecResult res = run_cli("family --n 4 --A -1 --k2 1 --rmax 0.9", 8);
  REQUIRE(res.exit_code == 0);
  const json report = json::parse(res.stdout_text);
  CHECK(report["config"]["A"] == -1.0);
  CHECK(report["config"]["k2"] == 1.0);
  const json& singular = report["verdicts"][1];
  CHECK(singular["name"] == "singular_set");
  CHECK(singular["has_origin"] == true);
  CHECK(std::abs(singular["sphere_radius"].get<double>() - 1.0) < 1e-12);
}

TEST_CASE("kazdan: three verdicts, all passing") {
  const ExecResult res = run_cli("kazdan --n 3", 9);
  REQUIRE(res.exit_code == 0);
  const json report = json::parse(res.stdout_text);
  REQUIRE(report["verdicts"].size() == 3);
  for (const auto& leg : report["verdicts"]) {
    CHECK(leg["pass"] == true);
  }
  CHECK(std::abs(report["verdicts"][0]["K_min"].get<double>() - 2.0) < 1e-9);
}

TEST_CASE("oracle-compare: closed form vs finite differences") {
  const ExecResult res = run_cli(
      "oracle-compare --profile family --n 3 --A 0.5 --k2 1 --rmin 0.5 "
      "--rmax 3 --count 7",
      10);
  REQUIRE(res.exit_code == 0);
  const json report = json::parse(res.stdout_text);
  CHECK(report["verdicts"][0]["pass"] == true);
  CHECK(report["values"].size() == 7);
  for (const auto& row : report["values"]) {
    CHECK(row["abs_diff"].get<double>() < 1e-4);
  }
}

TEST_CASE("oracle-compare accepts a pseudo-Euclidean signature") {
  const ExecResult res = run_cli(
      "oracle-compare --profile cylinder --n 4 --signature +++- --rmin 0.8 "
      "--rmax 2.5 --count 5",
      20);
  REQUIRE(res.exit_code == 0);
  const json report = json::parse(res.stdout_text);
  CHECK(report["config"]["signature"] == "+++-");
  CHECK(report["verdicts"][0]["pass"] == true);
  CHECK(report["values"].size() == 5);
}

TEST_CASE("reports are byte-identical across runs") {
  const std::string args =
      "verify-soliton --n 4 --A 0 --k2 1 --rho 0.25 --lambda 0 --count 12";
  const ExecResult a = run_cli(args, 11);
  const ExecResult b = run_cli(args, 12);
  REQUIRE(a.exit_code == 0);
  CHECK(a.stdout_text == b.stdout_text);

  // thread cap must not change the bytes either
  const fs::path out = scratch_dir() / "stdout_13";
  const std::string cmd = "SOLITON_LAB_THREADS=1 " + std::string(binary()) +
                          " " + args + " > " + out.string() + " 2> /dev/null";
  REQUIRE(std::system(cmd.c_str()) == 0);
  CHECK(slurp(out) == a.stdout_text);
}

TEST_CASE("output lands in --out and csv flattens the value rows") {
  const fs::path out = scratch_dir() / "report.csv";
  const ExecResult res = run_cli(
      "family --n 4 --A 1 --k2 2 --count 5 --format csv --out " + out.string(),
      14);
  REQUIRE(res.exit_code == 0);
  CHECK(res.stdout_text.empty());
  const std::string csv = slurp(out);
  std::istringstream lines(csv);
  std::string header;
  std::getline(lines, header);
  CHECK(header == "r,psi,psi_d1,psi_d2,K");
  int rows = 0;
  for (std::string line; std::getline(lines, line);) {
    if (!line.empty()) ++rows;
  }
  CHECK(rows == 5);
}

TEST_CASE("invalid configurations exit with code 2 and a message") {
  {
    const ExecResult res = run_cli("curvature --n 4 --count 1", 15);
    CHECK(res.exit_code == 2);
    CHECK(res.stderr_text.find("count") != std::string::npos);
  }
  {
    const ExecResult res = run_cli("curvature --n 4 --signature ++-", 16);
    CHECK(res.exit_code == 2);
    CHECK(res.stderr_text.find("signature") != std::string::npos);
  }
  {
    const ExecResult res = run_cli("curvature --n 4 --rmin -1", 17);
    CHECK(res.exit_code == 2);
  }
  {
    const ExecResult res = run_cli("rigidity-scan --n 4 --k2 0", 18);
    CHECK(res.exit_code == 2);
  }
}

TEST_CASE("unknown flags are rejected by the parser") {
  const ExecResult res = run_cli("curvature --no-such-flag", 19);
  CHECK(res.exit_code != 0);
}
