#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "corrdesign/io.hpp"
#include "test_util.hpp"

namespace fs = std::filesystem;
using namespace corrdesign;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

fs::path scratch() {
  const fs::path dir = fs::temp_directory_path() / "corrdesign_cli_test";
  fs::create_directories(dir);
  return dir;
}

std::string quote(const std::string& s) {
  std::string q = "'";
  for (char ch : s) q += ch == '\'' ? std::string("'\\''") : std::string(1, ch);
  return q + "'";
}

Run run(const std::string& args) {
  const char* cli = std::getenv("CORRDESIGN_CLI");
  REQUIRE_MESSAGE(cli != nullptr, "CORRDESIGN_CLI is not set");
  const fs::path capture = scratch() / "stdout.txt";
  const std::string cmd = quote(cli) + " " + args + " > " + quote(capture.string()) + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(capture);
  std::stringstream ss;
  ss << in.rdbuf();
  r.out = ss.str();
  return r;
}

const std::string kTriangular =
    R"({"basis": {"family": "monomial", "m": 2}, "kernel": {"family": "triangular", "params": {"lambda": 0.25}}})";

}  // namespace

TEST_CASE("check certifies the two-point design") {
  const Run r = run("check --set " + quote(kTriangular) + " --design two_point --grid-n 101");
  REQUIRE(r.code == 0);
  const Json j = Json::parse(r.out);
  CHECK(j.at("schema") == kSchema);
  CHECK(j.at("universal").at("verdict") == "CERTIFIED");
  CHECK(j.at("necessary").at("pass").get<bool>());
}

TEST_CASE("check writes report files") {
  const fs::path out = scratch() / "check";
  fs::remove_all(out);
  const Run r = run("check --set " + quote(kTriangular) + " --design arcsine --grid-n 51 --out " + quote(out.string()));
  CHECK(r.code == 0);
  CHECK(fs::exists(out / "report.json"));
  std::ifstream csv(out / "report.csv");
  std::string header;
  std::getline(csv, header);
  CHECK(header == "x,phi,b,d,psi,r,g1,g2");
  const Json j = read_json_file((out / "report.json").string());
  CHECK(j.at("universal").at("verdict") != "CERTIFIED");
}

TEST_CASE("solve writes design, trace and report") {
  const fs::path out = scratch() / "solve";
  fs::remove_all(out);
  const Run r = run("solve --set " + quote(kTriangular) + " --grid-n 21 --max-iter 20000 --out " + quote(out.string()));
  CHECK(r.code == 0);
  const Design d = read_design_csv_file((out / "design.csv").string());
  CHECK(d.weights().sum() == doctest::Approx(1.0));
  std::ifstream trace(out / "trace.csv");
  std::string header;
  std::getline(trace, header);
  CHECK(header.rfind("iter,criterion,max_psi_dev", 0) == 0);
  const Json j = read_json_file((out / "report.json").string());
  CHECK(j.at("status") == "CONVERGED");
}

TEST_CASE("exit codes") {
  CHECK(run("solve --set " + quote(kTriangular) + " --grid-n 21 --max-iter 2").code == 4);
  CHECK(run("check --set '{\"basis\": {\"family\": \"monomial\", \"m\": 2}, \"kernel\": {\"family\": \"nope\"}}' "
            "--design two_point")
            .code == 2);
  CHECK(run("check --set '{\"schema\": \"other/9\"}' --design two_point").code == 2);
  CHECK(run("check --set " + quote(kTriangular) + " --design /nonexistent.csv").code == 2);
  CHECK(run("frobnicate").code == 2);
  // Two atoms cannot support a quadratic model.
  CHECK(run("check --set '{\"basis\": {\"family\": \"monomial\", \"m\": 3}, \"kernel\": {\"family\": \"exponential\", "
            "\"params\": {\"lambda\": 1}}}' --design two_point")
            .code == 3);
}

TEST_CASE("spectral and mc-oracle") {
  const Run s = run("spectral --pair chebyshev-log --index 2");
  REQUIRE(s.code == 0);
  const Json j = Json::parse(s.out);
  CHECK(j.dump().find("empirical_eigenvalue") != std::string::npos);

  const Run mc = run("mc-oracle --set " + quote(kTriangular) + " --n-rep 5000 --seed 7 --points 6");
  REQUIRE(mc.code == 0);
  const Json m = Json::parse(mc.out);
  CHECK(m.dump().find("max_abs_z") != std::string::npos);
}

TEST_CASE("efficiency against a given reference") {
  const std::string cfg =
      R"({"basis": {"family": "monomial", "m": 1}, "kernel": {"family": "exponential", "params": {"lambda": 1}}})";
  const Run r = run("efficiency --set " + quote(cfg) + " --design two_point --reference two_point");
  REQUIRE(r.code == 0);
  CHECK(Json::parse(r.out).at("efficiency").get<double>() == doctest::Approx(1.0));
}
