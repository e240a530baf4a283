// Golden tests of the command-line tool: exit codes, outputs, determinism.

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;
using Json = nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(CPH_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::string out;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
  const int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

fs::path scratch_dir() {
  const fs::path d = fs::temp_directory_path() / ("cph_cli_test_" + std::to_string(::getpid()));
  fs::create_directories(d);
  return d;
}

const std::string kPoleGerm = R"('{"alpha":[1,0],"beta":[0,0],"x":[1,0],"y":[0,0],"t0":[0,0]}')";
const std::string kGenericGerm = R"('{"alpha":[1,0],"beta":[2,0],"x":[1,0],"y":[1,0]}')";
const std::string kTanGerm = R"('{"alpha":[0,0],"beta":[1,0],"x":[1,0],"y":[0,0]}')";

}  // namespace

TEST_CASE("shoot exit codes") {
  auto r = run("shoot --germ " + kPoleGerm + " --path '[[0,0],[2,0]]'");
  CHECK(r.code == 3);
  auto j = Json::parse(r.out);
  CHECK(j["status"] == "Obstructed");
  CHECK(std::abs(j["obstruction"]["t"][0].get<double>() - 1.0) < 1e-3);

  r = run("shoot --germ " + kPoleGerm + " --path '[[0,0],[0.5,0.5],[2,0]]'");
  CHECK(r.code == 0);
  j = Json::parse(r.out);
  CHECK(j["status"] == "Completed");
  CHECK(std::abs(j["endpoint"]["u"][0].get<double>() + 1.0) < 1e-6);
  CHECK(j["obstruction"].is_null());

  // Exponential geodesic (e^{-t}, e^{-t}).
  r = run(R"(shoot --germ '{"alpha":[1,0],"beta":[1,0],"x":[-1,0],"y":[-1,0]}' --path '[[0,0],[1,0]]')");
  CHECK(r.code == 0);
  j = Json::parse(r.out);
  CHECK(std::abs(j["endpoint"]["u"][0].get<double>() - std::exp(-1.0)) < 1e-8);
}

TEST_CASE("malformed and out-of-domain input") {
  CHECK(run("shoot --germ '{bad' --path '[[0,0],[1,0]]'").code == 2);
  CHECK(run("shoot --germ " + kPoleGerm + " --path '[[0,0]]'").code == 2);
  CHECK(run("shoot --germ " + kPoleGerm + " --path '[[1,0],[2,0]]'").code == 2);
  CHECK(run("shoot --germ " + kPoleGerm + " --path '[[0,0],[1,0]]' --tol 1").code == 2);
  CHECK(run("shoot --germ " + kPoleGerm).code == 2);
  CHECK(run("frobnicate").code == 2);
  CHECK(run("classify --germ '{\"alpha\":[1,0]}'").code == 2);
  CHECK(run("probe --germ " + kTanGerm + " --rays 2").code == 2);
  CHECK(run("probe --germ " + kTanGerm + " --radius -1").code == 2);

  const std::string cone = R"('{"alpha":[1,0],"beta":[0,1],"x":[1,0],"y":[0,0]}')";
  CHECK(run("shoot --germ " + cone + " --path '[[0,0],[1,0]]'").code == 4);
  CHECK(run("classify --germ " + cone).code == 4);
  CHECK(run(R"(shoot --germ '{"alpha":[1,0],"beta":[2,0],"x":[0,0],"y":[0,0]}' --path '[[0,0],[1,0]]')")
            .code == 4);
}

TEST_CASE("classify") {
  auto r = run("classify --germ " + kPoleGerm);
  CHECK(r.code == 0);
  CHECK(Json::parse(r.out)["tag"] == "NullVConst");

  r = run(R"(classify --germ '{"alpha":[1,0],"beta":[2,0],"x":[1,0],"y":[2,0]}')");
  auto j = Json::parse(r.out);
  CHECK(j["tag"] == "Exponential");
  CHECK(std::abs(j["discriminant"][0].get<double>() - 2.0) < 1e-15);

  r = run("classify --germ " + kGenericGerm);
  j = Json::parse(r.out);
  CHECK(j["tag"] == "Generic");
  CHECK(std::abs(j["discriminant"][0].get<double>() - 2.25) < 1e-15);
  CHECK(std::abs(j["A"][0].get<double>() - 0.2) < 1e-15);
  CHECK(std::abs(j["B"][0].get<double>() - 3.0) < 1e-15);
}

TEST_CASE("probe") {
  auto r = run("probe --germ " + kTanGerm + " --radius 5 --rays 64");
  CHECK(r.code == 0);
  auto j = Json::parse(r.out);
  CHECK(j["count"] == 4);
  CHECK(j["per_ray"].size() == 64);
  CHECK(j["manifest"]["parameters"]["rays"] == 64);
  CHECK(j["converged"] == true);
  CHECK(j["final_rays"] == 128);

  r = run(R"(probe --germ '{"alpha":[1,0],"beta":[1,0],"x":[1,0],"y":[1,0]}' --radius 10)");
  CHECK(Json::parse(r.out)["count"] == 0);

  r = run("probe --germ " + kPoleGerm + " --radius 3");
  j = Json::parse(r.out);
  REQUIRE(j["count"] == 1);
  CHECK(std::abs(j["obstructions"][0][0].get<double>() - 1.0) < 1e-4);
}

TEST_CASE("files, CSV and determinism") {
  const fs::path dir = scratch_dir();
  const fs::path germ_file = dir / "germ.json";
  std::ofstream(germ_file) << R"({"alpha":[1,0],"beta":[2,0],"x":[1,0],"y":[1,0]})";
  const fs::path path_file = dir / "path.json";
  std::ofstream(path_file) << "[[0,0],[0.5,0.5],[1,0]]";

  const std::string args =
      "shoot --germ " + germ_file.string() + " --path " + path_file.string() + " --csv --out ";
  CHECK(run(args + (dir / "a.json").string()).code == 0);
  CHECK(run(args + (dir / "b.json").string()).code == 0);
  const std::string a = slurp(dir / "a.json");
  CHECK_FALSE(a.empty());
  CHECK(a == slurp(dir / "b.json"));
  CHECK(slurp(dir / "a.csv") == slurp(dir / "b.csv"));

  const auto j = Json::parse(a);
  const std::string csv = slurp(dir / "a.csv");
  CHECK(csv.rfind("t_re,t_im,u_re,u_im,v_re,v_im,du_re,du_im,dv_re,dv_im\n", 0) == 0);
  CHECK(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')) == j["samples"].size() + 1);

  // Without --out the CSV goes to stdout.
  const auto r = run("shoot --germ " + germ_file.string() + " --path " + path_file.string() + " --csv");
  CHECK(r.out == csv);

  // Probe output is byte-identical too.
  const auto p1 = run("probe --germ " + germ_file.string());
  const auto p2 = run("probe --germ " + germ_file.string());
  CHECK(p1.out == p2.out);
  fs::remove_all(dir);
}

TEST_CASE("verify") {
  const auto r = run("verify");
  CHECK(r.code == 0);
  CHECK(r.out.find("[FAIL]") == std::string::npos);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 10);
}
