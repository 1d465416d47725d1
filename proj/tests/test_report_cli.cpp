#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "twistorlab/catalogue.hpp"
#include "twistorlab/report.hpp"
#include "twistorlab/theorems.hpp"

using namespace twistorlab;
using theorems::DefectReport;

namespace {
std::vector<DefectReport> sample_rows() {
  theorems::VerifyParams p;
  p.spec = find_manifold("flat");
  REQUIRE(p.spec != nullptr);
  p.samples = 3;
  auto rows = theorems::run_theorem("core", p);
  // one synthetic row exercising non-finite serialization
  DefectReport odd;
  odd.theorem = "prop2/type11_biconditional";
  odd.manifold = "perturbed";
  odd.t = 1.0 / 3.0;
  odd.n = 2;
  odd.samples = 1;
  odd.seed = 42;
  odd.max_abs_residual = std::numeric_limits<double>::quiet_NaN();
  odd.tolerance = 1e-6;
  odd.verdict = "warn";
  odd.note = "synthetic";
  rows.push_back(odd);
  return rows;
}

std::string write_temp(const char* name, const std::string& body) {
  std::string path = std::string("/tmp/") + name;
  std::ofstream f(path);
  f << body;
  f.close();
  return path;
}

int run_cli(const std::string& args) {
  const char* exe = std::getenv("TWISTORLAB_CLI");
  REQUIRE(exe != nullptr);
  std::string cmd = std::string(exe) + " " + args + " >/dev/null 2>&1";
  int rc = std::system(cmd.c_str());
  REQUIRE(rc != -1);
  return WEXITSTATUS(rc);
}
}  // namespace

TEST_CASE("json serialization is deterministic and pins its grammar") {
  report::RunConfig cfg;
  cfg.command = "verify";
  cfg.theorems = {"core"};
  cfg.manifolds = {"flat"};
  cfg.t_values = {1.0 / 3.0};
  cfg.n_values = {1};
  auto rows = sample_rows();
  std::string a = report::to_json(cfg, rows, 123.4);
  std::string b = report::to_json(cfg, rows, 99.9);
  CHECK(a == b);  // timing is off, wall time must not leak in
  CHECK(a.find("\"wall_time_ms\": null") != std::string::npos);
  CHECK(a.find("0.333333333333") != std::string::npos);  // twelve digits
  CHECK(a.find("\"engine\": \"0.1.0\"") != std::string::npos);
  // NaN residuals may not produce bare NaN tokens, which break parsers
  CHECK(a.find("nan") == std::string::npos);
  CHECK(a.find("\"max_abs_residual\": null") != std::string::npos);

  cfg.timing = true;
  std::string c = report::to_json(cfg, rows, 123.4);
  CHECK(c.find("\"wall_time_ms\": 123.4") != std::string::npos);
}

TEST_CASE("csv serialization pins the header and quoting") {
  auto rows = sample_rows();
  std::string csv = report::to_csv(rows);
  CHECK(csv.substr(0, csv.find('\n')) ==
        "theorem,manifold,t,n,samples,seed,max_abs_residual,tolerance,"
        "verdict,worst");
  size_t lines = 0;
  for (char ch : csv)
    if (ch == '\n') ++lines;
  CHECK(lines == rows.size() + 1);
}

TEST_CASE("text serialization counts the verdicts") {
  auto rows = sample_rows();
  std::string text = report::to_text(rows);
  char want[64];
  std::snprintf(want, sizeof want, "%d checks:", int(rows.size()));
  CHECK(text.find(want) != std::string::npos);
  CHECK(text.find("1 warn") != std::string::npos);
}

TEST_CASE("config files are validated strictly") {
  std::string good = write_temp("twistorlab_cfg_good.json", R"({
    "command": "verify",
    "theorems": ["prop1", "prop2"],
    "manifolds": ["s4"],
    "t_values": [0.5, 1.0],
    "n_values": [2],
    "samples": 7,
    "seed": 99,
    "tol": {"prop1/closed_form": 1e-5},
    "format": "csv"
  })");
  report::RunConfig cfg = report::load_config(good);
  CHECK(cfg.command == "verify");
  CHECK(cfg.theorems == std::vector<std::string>{"prop1", "prop2"});
  CHECK(cfg.manifolds == std::vector<std::string>{"s4"});
  CHECK(cfg.t_values == std::vector<double>{0.5, 1.0});
  CHECK(cfg.n_values == std::vector<int>{2});
  CHECK(cfg.samples == 7);
  CHECK(cfg.seed == 99);
  CHECK(cfg.tol.at("prop1/closed_form") == 1e-5);
  CHECK(cfg.format == "csv");

  std::string unknown =
      write_temp("twistorlab_cfg_unknown.json", R"({"samplez": 3})");
  CHECK_THROWS_AS(report::load_config(unknown), std::runtime_error);
  std::string badfmt =
      write_temp("twistorlab_cfg_badfmt.json", R"({"format": "xml"})");
  CHECK_THROWS_AS(report::load_config(badfmt), std::runtime_error);
  std::string badn =
      write_temp("twistorlab_cfg_badn.json", R"({"n_values": [3]})");
  CHECK_THROWS_AS(report::load_config(badn), std::runtime_error);
  CHECK_THROWS_AS(report::load_config("/tmp/definitely_missing_cfg.json"),
                  std::runtime_error);
}

TEST_CASE("command line exits encode usage, failure, and success") {
  CHECK(run_cli("list") == 0);
  CHECK(run_cli("verify prop9 --manifold flat") == 2);
  CHECK(run_cli("verify core --manifold flat --samples 2") == 0);
  CHECK(run_cli("verify eq519_520 --manifold s2xs2 --samples 2") == 2);
  CHECK(run_cli("verify core --manifold flat --samples 2 --tol core=1e-30") ==
        1);
  CHECK(run_cli("decompose --manifold flat") == 0);
  CHECK(run_cli("--help") == 0);
}

TEST_CASE("suite output is byte identical across runs") {
  const char* exe = std::getenv("TWISTORLAB_CLI");
  REQUIRE(exe != nullptr);
  std::string cfg = write_temp("twistorlab_suite_cfg.json", R"({
    "theorems": ["lemma2"],
    "manifolds": ["flat"],
    "t_values": [1.0],
    "samples": 2,
    "format": "json"
  })");
  const char* outp = "/tmp/twistorlab_suite_out.json";
  auto run_once = [&] {
    std::string cmd = std::string(exe) + " suite --config " + cfg + " --out " +
                      outp + " >/dev/null 2>&1";
    REQUIRE(std::system(cmd.c_str()) != -1);
    std::ifstream f(outp);
    return std::string((std::istreambuf_iterator<char>(f)),
                       std::istreambuf_iterator<char>());
  };
  std::string sa = run_once();
  std::string sb = run_once();
  REQUIRE(!sa.empty());
  CHECK(sa == sb);
}
