// Acceptance gate: one line per criterion, nonzero exit when any fails.
// argv[1] must be the path of the command line tool (used by the last two).
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "twistorlab/catalogue.hpp"
#include "twistorlab/theorems.hpp"

using namespace twistorlab;
namespace th = twistorlab::theorems;

namespace {

std::vector<th::DefectReport> run(const std::string& id, const char* manifold,
                                  double t, int n, int samples) {
  th::VerifyParams p;
  p.spec = find_manifold(manifold);
  if (!p.spec) {
    std::fprintf(stderr, "unknown manifold %s\n", manifold);
    std::exit(2);
  }
  p.t = t;
  p.n = n;
  p.samples = samples;
  return th::run_theorem(id, p);
}

const th::DefectReport* pick(const std::vector<th::DefectReport>& rows,
                             const std::string& name) {
  for (const auto& r : rows)
    if (r.theorem == name) return &r;
  return nullptr;
}

struct Gate {
  bool ok = true;
  double worst = 0.0;      // residual bounded from above
  double smallest = 1e30;  // residual bounded from below (negative controls)
  std::string why;

  void above(const th::DefectReport* r, double bound) {
    if (!r) {
      ok = false;
      why = "missing check row";
      return;
    }
    worst = std::max(worst, r->max_abs_residual);
    if (r->verdict != "pass" || !(r->max_abs_residual < bound)) {
      ok = false;
      if (why.empty())
        why = r->theorem + " on " + r->manifold + " verdict " + r->verdict;
    }
  }
  void below(const th::DefectReport* r, double floor) {
    if (!r) {
      ok = false;
      why = "missing check row";
      return;
    }
    smallest = std::min(smallest, r->max_abs_residual);
    if (r->verdict != "pass" || !(r->max_abs_residual > floor)) {
      ok = false;
      if (why.empty())
        why = r->theorem + " on " + r->manifold + " stayed quiet";
    }
  }
};

int g_failures = 0;

void line(int idx, const Gate& g, const char* what, double bound,
          double floor = 0.0) {
  std::string tail;
  char buf[128];
  if (bound > 0.0) {
    std::snprintf(buf, sizeof buf, "max residual %.3e (bound %.0e)", g.worst,
                  bound);
    tail = buf;
  }
  if (floor > 0.0 && g.smallest < 1e30) {
    std::snprintf(buf, sizeof buf, "%scontrols >= %.3e (floor %.0e)",
                  tail.empty() ? "" : ", ", g.smallest, floor);
    tail += buf;
  }
  if (!g.ok && !g.why.empty()) tail += " [" + g.why + "]";
  std::printf("criterion %2d: %s  %-52s %s\n", idx, g.ok ? "PASS" : "FAIL",
              what, tail.c_str());
  if (!g.ok) ++g_failures;
}

const char* kAll[] = {"flat", "s4", "s4_k2", "h4", "cp2", "s2xs2", "perturbed"};

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: %s <cli-binary>\n", argv[0]);
    return 2;
  }
  const std::string cli = argv[1];

  // 1. the n = 2 obstruction form vanishes identically, everywhere
  {
    Gate g;
    for (const char* m : kAll)
      for (double t : {0.5, 1.0, 2.0}) {
        auto rows = run("prop1", m, t, 2, 50);
        g.above(pick(rows, "prop1/vanishing"), 1e-7);
      }
    line(1, g, "obstruction form vanishes for the second structure", 1e-7);
  }

  // 2. the n = 1 obstruction closed form matches the chart trace
  {
    Gate g;
    for (const char* m : {"flat", "s4", "h4", "s2xs2", "perturbed"}) {
      auto rows = run("prop1", m, 1.0, 1, 50);
      g.above(pick(rows, "prop1/closed_form"), 1e-6);
    }
    line(2, g, "first-structure obstruction closed form", 1e-6);
  }

  // 3. trace identity of the connection family on the sphere
  {
    Gate g;
    for (int n : {1, 2}) {
      auto rows = run("lemma1", "s4", 1.0, n, 30);
      g.above(pick(rows, "lemma1/trace_family_identity"), 1e-6);
    }
    line(3, g, "connection family trace identity", 1e-6);
  }

  // 4. bundle curvature displays and the star-Ricci closed form
  {
    Gate g;
    for (const char* m : {"s4", "h4"})
      for (int n : {1, 2}) {
        auto rows = run("lemma2", m, 1.0, n, 30);
        for (const char* c : {"lemma2/horizontal_horizontal",
                              "lemma2/vertical_horizontal",
                              "lemma2/vanishing_slots"})
          g.above(pick(rows, c), 1e-6);
        auto rows3 = run("lemma3", m, 1.0, n, 30);
        g.above(pick(rows3, "lemma3/closed_form"), 1e-6);
      }
    line(4, g, "curvature displays and star-Ricci closed form", 1e-6);
  }

  // 5. type-(1,1) biconditional, both directions
  {
    Gate g;
    for (const char* m : {"s4", "h4", "cp2"}) {
      auto rows = run("prop2", m, 1.0, 1, 30);
      g.above(pick(rows, "prop2/type11_biconditional"), 1e-6);
    }
    for (const char* m : {"s4", "h4"}) {
      auto rows = run("prop2", m, 1.0, 2, 30);
      g.above(pick(rows, "prop2/type11_biconditional"), 1e-6);
    }
    {
      auto rows = run("prop2", "perturbed", 1.0, 1, 30);
      g.below(pick(rows, "prop2/type11_biconditional"), 1e-3);
    }
    {
      auto rows = run("prop2", "s2xs2", 1.0, 2, 30);
      g.below(pick(rows, "prop2/type11_biconditional"), 1e-3);
    }
    line(5, g, "curvature type biconditional with controls", 1e-6, 1e-3);
  }

  // 6. holomorphic sectional curvature: constancy exactly at the right cell
  {
    Gate g;
    {
      auto rows = run("prop3", "s4", 1.0, 1, 30);
      g.above(pick(rows, "prop3/constancy"), 1e-6);
    }
    {
      auto rows = run("prop3", "s4", 1.0, 2, 30);
      g.below(pick(rows, "prop3/constancy"), 1e-3);
    }
    {
      auto rows = run("prop3", "s4", 2.0, 1, 30);
      g.below(pick(rows, "prop3/constancy"), 1e-3);
    }
    for (const char* m : {"flat", "s4", "s4_k2", "h4"})
      for (int n : {1, 2}) {
        auto rows = run("prop3", m, 1.0, n, 30);
        g.above(pick(rows, "prop3/mixed_closed_form"), 1e-6);
      }
    line(6, g, "holomorphic sectional curvature constancy", 1e-6, 1e-3);
  }

  // 7. second structure is nearly Kaehler on Einstein self-dual bases
  {
    Gate g;
    for (const char* m : {"s4", "h4"})
      for (double t : {0.5, 1.0, 2.0}) {
        auto rows = run("prop4", m, t, 1, 30);
        g.above(pick(rows, "prop4/nijenhuis_parallel"), 1e-5);
      }
    {
      auto rows = run("prop4", "perturbed", 1.0, 1, 30);
      g.below(pick(rows, "prop4/nijenhuis_parallel"), 1e-3);
    }
    // negative scalar curvature base at its distinguished radius: the
    // fundamental form closes while the obstruction stays parallel and the
    // curvature stays type (1,1)
    {
      auto rows = run("prop4", "h4", 1.0, 1, 30);
      g.above(pick(rows, "prop4/almost_kaehler"), 1e-7);
      auto r1 = run("prop1", "h4", 1.0, 2, 30);
      g.above(pick(r1, "prop1/vanishing"), 1e-7);
      auto r2 = run("prop2", "h4", 1.0, 2, 30);
      g.above(pick(r2, "prop2/type11_biconditional"), 1e-6);
    }
    line(7, g, "parallel obstruction and the almost Kaehler point", 1e-5,
         1e-3);
  }

  // 8. infrastructure identities on the least symmetric base
  {
    Gate g;
    auto gate_all = [&g](const std::vector<th::DefectReport>& rows) {
      for (const auto& r : rows)
        if (r.verdict != "skip") g.above(&r, 1e-6);
    };
    gate_all(run("core", "perturbed", 1.0, 1, 30));
    for (int n : {1, 2}) {
      gate_all(run("stensor", "perturbed", 1.0, n, 30));
      gate_all(run("conn", "perturbed", 1.0, n, 30));
      gate_all(run("lemma2", "perturbed", 1.0, n, 30));
    }
    gate_all(run("aux", "perturbed", 1.0, 1, 30));
    gate_all(run("eq519_520", "h4", 1.0, 1, 30));
    line(8, g, "bundle calculus infrastructure identities", 1e-6);
  }

  // 9. independent difference-quotient oracle agrees with the jet pipeline
  {
    Gate g;
    std::string cmd = cli +
                      " oracle --samples 30 --seed 2026 --format json"
                      " --out /tmp/twistorlab_acceptance_oracle.json"
                      " >/dev/null 2>&1";
    int rc = std::system(cmd.c_str());
    g.ok = rc != -1 && WEXITSTATUS(rc) == 0;
    if (!g.ok) g.why = "oracle command exited nonzero";
    line(9, g, "finite-difference oracle on a ten percent subsample", 0.0);
  }

  // 10. identical configuration reproduces byte-identical reports
  {
    Gate g;
    const char* cfgp = "/tmp/twistorlab_acceptance_suite.json";
    {
      std::ofstream f(cfgp);
      f << "{\n  \"theorems\": [\"prop1\", \"lemma2\", \"prop4\"],\n"
           "  \"manifolds\": [\"s4\", \"perturbed\"],\n"
           "  \"t_values\": [0.5, 1.0],\n  \"samples\": 5,\n"
           "  \"format\": \"json\"\n}\n";
    }
    auto once = [&](const char* out) {
      std::string cmd = cli + " suite --config " + cfgp + " --out " + out +
                        " >/dev/null 2>&1";
      int rc = std::system(cmd.c_str());
      if (rc == -1 || WEXITSTATUS(rc) != 0) return std::string();
      std::ifstream f(out);
      return std::string((std::istreambuf_iterator<char>(f)),
                         std::istreambuf_iterator<char>());
    };
    std::string a = once("/tmp/twistorlab_acceptance_suite_out.json");
    std::string b = once("/tmp/twistorlab_acceptance_suite_out.json");
    g.ok = !a.empty() && a == b;
    if (!g.ok) g.why = a.empty() ? "suite run failed" : "outputs differ";
    line(10, g, "suite reports are byte identical across runs", 0.0);
  }

  if (g_failures == 0) {
    std::printf("acceptance: all 10 criteria pass\n");
    return 0;
  }
  std::printf("acceptance: %d criterion(s) failing\n", g_failures);
  return 1;
}
