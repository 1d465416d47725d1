#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "twistorlab/catalogue.hpp"
#include "twistorlab/theorems.hpp"

using namespace twistorlab;
using theorems::DefectReport;
using theorems::VerifyParams;

namespace {
VerifyParams params(const char* name, double t = 1.0, int n = 1,
                    int samples = 6) {
  VerifyParams p;
  p.spec = find_manifold(name);
  REQUIRE(p.spec != nullptr);
  p.t = t;
  p.n = n;
  p.samples = samples;
  return p;
}

const DefectReport& row(const std::vector<DefectReport>& rows,
                        const std::string& theorem) {
  auto it = std::find_if(rows.begin(), rows.end(), [&](const DefectReport& r) {
    return r.theorem == theorem;
  });
  REQUIRE(it != rows.end());
  return *it;
}

bool all_clean(const std::vector<DefectReport>& rows) {
  return std::all_of(rows.begin(), rows.end(), [](const DefectReport& r) {
    return r.verdict == "pass" || r.verdict == "skip";
  });
}
}  // namespace

TEST_CASE("the verifier publishes a fixed id registry") {
  const auto& ids = theorems::theorem_ids();
  CHECK(ids.size() == 12);
  std::set<std::string> s(ids.begin(), ids.end());
  for (const char* id :
       {"core", "stensor", "conn", "lemma1", "lemma2", "lemma3", "prop1",
        "prop2", "prop3", "prop4", "eq519_520", "aux"})
    CHECK(s.count(id) == 1);
  CHECK(theorems::known_theorem("prop2"));
  CHECK_FALSE(theorems::known_theorem("prop9"));
  CHECK_FALSE(theorems::theorem_uses_n("core"));
  CHECK(theorems::theorem_uses_n("prop2"));
}

TEST_CASE("degenerate parameters are rejected") {
  CHECK_THROWS_AS(theorems::run_theorem("nope", params("flat")),
                  std::invalid_argument);
  VerifyParams bad = params("flat");
  bad.spec = nullptr;
  CHECK_THROWS_AS(theorems::run_theorem("core", bad), std::invalid_argument);
  bad = params("flat");
  bad.samples = 0;
  CHECK_THROWS_AS(theorems::run_theorem("core", bad), std::invalid_argument);
  bad = params("flat");
  bad.n = 3;
  CHECK_THROWS_AS(theorems::run_theorem("core", bad), std::invalid_argument);
  bad = params("flat");
  bad.t = -1.0;
  CHECK_THROWS_AS(theorems::run_theorem("core", bad), std::invalid_argument);
}

TEST_CASE("einstein self-dual preconditions are enforced") {
  const ManifoldSpec* prod = find_manifold("s2xs2");
  REQUIRE(prod != nullptr);
  CHECK_FALSE(theorems::theorem_applicable("eq519_520", *prod));
  CHECK(theorems::theorem_applicable("core", *prod));
  CHECK_THROWS_AS(theorems::run_theorem("eq519_520", params("s2xs2")),
                  std::invalid_argument);
}

TEST_CASE("closed forms hold on the round sphere") {
  auto rows = theorems::run_theorem("prop1", params("s4", 1.0, 1));
  CHECK(all_clean(rows));
  CHECK(row(rows, "prop1/closed_form").max_abs_residual < 1e-8);
  // the n = 1 structure never makes the obstruction vanish, so that check
  // reports a skip rather than a verdict on no data
  CHECK(row(rows, "prop1/vanishing").verdict == "skip");
  CHECK(row(rows, "prop1/vanishing").samples == 0);

  auto rows2 = theorems::run_theorem("prop1", params("s4", 1.0, 2));
  CHECK(row(rows2, "prop1/vanishing").verdict == "pass");
}

TEST_CASE("negative controls must stay loud") {
  auto rows = theorems::run_theorem("prop2", params("perturbed", 1.0, 1, 8));
  const DefectReport& r = row(rows, "prop2/type11_biconditional");
  CHECK(r.verdict == "pass");
  CHECK(r.note.find("negative") != std::string::npos);
  CHECK(r.max_abs_residual > 1e-3);
}

TEST_CASE("holomorphic sectional constancy pins the radius") {
  auto good = theorems::run_theorem("prop3", params("s4", 1.0, 1, 8));
  CHECK(row(good, "prop3/constancy").verdict == "pass");
  auto off = theorems::run_theorem("prop3", params("s4", 2.0, 1, 8));
  const DefectReport& r = row(off, "prop3/constancy");
  CHECK(r.verdict == "pass");
  CHECK(r.note.find("negative") != std::string::npos);
}

TEST_CASE("inapplicable cells report skips") {
  auto rows = theorems::run_theorem("prop4", params("s2xs2", 1.0, 1, 4));
  REQUIRE(!rows.empty());
  for (const auto& r : rows) CHECK(r.verdict == "skip");
}

TEST_CASE("tolerance overrides are honoured at both granularities") {
  VerifyParams p = params("s4", 1.0, 1, 4);
  p.tol["prop1/closed_form"] = 1e-20;
  auto rows = theorems::run_theorem("prop1", p);
  CHECK(row(rows, "prop1/closed_form").verdict == "fail");
  CHECK(row(rows, "prop1/closed_form").tolerance == 1e-20);

  VerifyParams q = params("s4", 1.0, 1, 4);
  q.tol["prop1"] = 1.0;
  auto rows2 = theorems::run_theorem("prop1", q);
  CHECK(row(rows2, "prop1/closed_form").verdict == "pass");
  CHECK(row(rows2, "prop1/closed_form").tolerance == 1.0);
}

TEST_CASE("identical parameters reproduce identical reports") {
  VerifyParams p = params("perturbed", 0.7, 2, 5);
  auto a = theorems::run_theorem("lemma2", p);
  auto b = theorems::run_theorem("lemma2", p);
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].theorem == b[i].theorem);
    CHECK(a[i].max_abs_residual == b[i].max_abs_residual);
    CHECK(a[i].seed == b[i].seed);
    CHECK(a[i].worst.x == b[i].worst.x);
    CHECK(a[i].worst.sigma == b[i].worst.sigma);
    CHECK(a[i].worst.vectors == b[i].worst.vectors);
  }
}

TEST_CASE("reports carry the cell coordinates") {
  auto rows = theorems::run_theorem("lemma1", params("h4", 0.5, 2, 4));
  for (const auto& r : rows) {
    CHECK(r.manifold == "h4");
    CHECK(r.t == 0.5);
    CHECK(r.n == 2);
    CHECK(r.samples == 4);
    CHECK(r.seed != 0);
    CHECK(r.theorem.substr(0, 7) == "lemma1/");
  }
}
