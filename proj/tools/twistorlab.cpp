#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "twistorlab/catalogue.hpp"
#include "twistorlab/fdcheck.hpp"
#include "twistorlab/frames.hpp"
#include "twistorlab/hermitian.hpp"
#include "twistorlab/report.hpp"
#include "twistorlab/riemann.hpp"
#include "twistorlab/rng.hpp"
#include "twistorlab/theorems.hpp"
#include "twistorlab/twistor.hpp"

namespace tl = twistorlab;
namespace th = twistorlab::theorems;
namespace rp = twistorlab::report;

namespace {

std::vector<double> default_t_sweep(const tl::ManifoldSpec& m) {
  std::vector<double> t{0.5, 1.0, 2.0};
  if (std::isfinite(m.scalar)) {
    if (m.scalar > 0.0) t.push_back(6.0 / m.scalar);
    if (m.scalar < 0.0) t.push_back(-12.0 / m.scalar);
  }
  std::sort(t.begin(), t.end());
  t.erase(std::unique(t.begin(), t.end(),
                      [](double a, double b) { return std::abs(a - b) < 1e-12; }),
          t.end());
  return t;
}

int thread_count() {
  if (const char* e = std::getenv("TWISTOR_LAB_THREADS")) {
    int v = std::atoi(e);
    if (v > 0) return v;
  }
  return 1;
}

struct Job {
  std::string id;
  const tl::ManifoldSpec* spec;
  double t;
  int n;
};

// Jobs run on worker threads into per-job slots; the merge order is the job
// order, so the report is identical no matter how many threads ran.
std::vector<th::DefectReport> run_jobs(const std::vector<Job>& jobs,
                                       const rp::RunConfig& cfg,
                                       std::string& error) {
  std::vector<std::vector<th::DefectReport>> slots(jobs.size());
  std::vector<std::string> errs(jobs.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    std::size_t i;
    while ((i = next.fetch_add(1)) < jobs.size()) {
      th::VerifyParams p;
      p.spec = jobs[i].spec;
      p.t = jobs[i].t;
      p.n = jobs[i].n;
      p.samples = cfg.samples;
      p.seed = cfg.seed;
      p.tol = cfg.tol;
      try {
        slots[i] = th::run_theorem(jobs[i].id, p);
      } catch (const std::exception& e) {
        errs[i] = e.what();
      }
    }
  };
  std::size_t nt = std::min<std::size_t>(
      static_cast<std::size_t>(thread_count()), std::max<std::size_t>(jobs.size(), 1));
  if (nt <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t k = 0; k < nt; ++k) pool.emplace_back(work);
    for (auto& w : pool) w.join();
  }
  std::vector<th::DefectReport> out;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    if (!errs[i].empty()) {
      error = errs[i];
      return {};
    }
    out.insert(out.end(), slots[i].begin(), slots[i].end());
  }
  return out;
}

double oracle_tol(const rp::RunConfig& cfg, const std::string& check) {
  auto it = cfg.tol.find(check);
  if (it != cfg.tol.end()) return it->second;
  it = cfg.tol.find("oracle");
  if (it != cfg.tol.end()) return it->second;
  return 1e-4;
}

// Curvature of both charts recomputed by extended-precision differences and
// compared against the jet pipeline on a small subsample.
std::vector<th::DefectReport> run_oracle(
    const rp::RunConfig& cfg, const std::vector<const tl::ManifoldSpec*>& mans,
    const std::vector<double>& ts) {
  std::vector<th::DefectReport> rows;
  for (const tl::ManifoldSpec* spec : mans) {
    const int count = std::max(1, cfg.samples / 10);
    const std::uint64_t sd = tl::SampleRng::derive(cfg.seed, "oracle|" + spec->name);
    auto pts = tl::sample_points(*spec, count, tl::SampleRng::derive(sd, "points"));
    tl::SampleRng rng(tl::SampleRng::derive(sd, "draws"));
    tl::MetricChart chart = tl::chart_of(*spec);

    tl::fd::MetricFn basefn = tl::fd::base_metric(*spec);
    th::DefectReport rb;
    rb.theorem = "oracle/base_chart";
    rb.manifold = spec->name;
    rb.t = 0.0;
    rb.n = 0;
    rb.samples = count;
    rb.seed = sd;
    rb.tolerance = oracle_tol(cfg, "oracle/base_chart");
    for (const auto& x : pts) {
      std::array<long double, 4> xl;
      for (int i = 0; i < 4; ++i) xl[i] = x[i];
      tl::T4<long double> Rfd = tl::fd::lowered_riemann(
          basefn, std::span<const long double>(xl.data(), 4), 1e-4L, 1e-4L);
      tl::CurvatureData cd =
          tl::curvature_data(chart, std::span<const double, 4>(x));
      double w = 0;
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
          for (int k = 0; k < 4; ++k)
            for (int l = 0; l < 4; ++l)
              w = std::max(w, std::abs(static_cast<double>(Rfd(i, j, k, l)) -
                                       cd.Riem(i, j, k, l)));
      if (w >= rb.max_abs_residual) {
        rb.max_abs_residual = w;
        rb.worst.x = x;
      }
    }
    rb.verdict = rb.max_abs_residual < rb.tolerance ? "pass" : "fail";
    rb.note = "differences vs jets, chart curvature";
    rows.push_back(rb);

    for (double t : ts) {
      th::DefectReport rt;
      rt.theorem = "oracle/twistor_chart";
      rt.manifold = spec->name;
      rt.t = t;
      rt.n = 0;
      rt.samples = count;
      rt.seed = sd;
      rt.tolerance = oracle_tol(cfg, "oracle/twistor_chart");
      tl::TwistorParams prm;
      prm.t = t;
      prm.n = 1;
      prm.south = false;
      prm.flip = spec->orientation_flip;
      prm.order = 2;
      tl::fd::MetricFn twfn = tl::fd::twistor_metric(*spec, prm);
      for (const auto& x : pts) {
        std::array<double, 3> y = rng.fiber_direction(0.6);
        auto uv = tl::fiber_coords(tl::FiberChart{false}, y);
        std::array<long double, 6> zl;
        for (int i = 0; i < 4; ++i) zl[i] = x[i];
        zl[4] = uv[0];
        zl[5] = uv[1];
        tl::T4<long double> Rfd = tl::fd::lowered_riemann(
            twfn, std::span<const long double>(zl.data(), 6), 1e-3L, 1e-4L);
        tl::TwistorPoint tp = tl::make_twistor_point(chart, x, uv[0], uv[1], prm);
        tl::Mat<tl::Jet> hinv = tl::inverse(tp.h);
        tl::T4<double> R4 = tl::hermitian::lower_curvature(
            tl::connection_curvature_values(tl::christoffel_jets(tp.h, hinv)),
            tp.hval);
        double w = 0;
        for (std::size_t i = 0; i < R4.a.size(); ++i)
          w = std::max(w, std::abs(static_cast<double>(Rfd.a[i]) - R4.a[i]));
        if (w >= rt.max_abs_residual) {
          rt.max_abs_residual = w;
          rt.worst.x = x;
          rt.worst.sigma = y;
        }
      }
      rt.verdict = rt.max_abs_residual < rt.tolerance ? "pass" : "fail";
      rt.note = "differences vs jets, bundle metric curvature";
      rows.push_back(rt);
    }
  }
  return rows;
}

std::string frob(const tl::Mat<double>& m) {
  double s = 0;
  for (double v : m.a) s += v * v;
  char b[24];
  std::snprintf(b, sizeof b, "%.3e", std::sqrt(s));
  return b;
}

std::string decompose_text(const rp::RunConfig& cfg,
                           const std::vector<const tl::ManifoldSpec*>& mans,
                           const std::vector<double>& point) {
  std::string s =
      "manifold    points  scalar range             max|B|     max|W+|    "
      "max|W-|    einstein  self-dual  anti-self-dual\n";
  for (const tl::ManifoldSpec* spec : mans) {
    std::vector<std::array<double, 4>> pts;
    if (point.size() == 4)
      pts.push_back({point[0], point[1], point[2], point[3]});
    else
      pts = tl::sample_points(
          *spec, cfg.samples,
          tl::SampleRng::derive(cfg.seed, "decompose|" + spec->name));
    tl::MetricChart chart = tl::chart_of(*spec);
    double smin = 1e300, smax = -1e300, bn = 0, wp = 0, wm = 0;
    bool ein = true, sd = true, asd = true;
    for (const auto& x : pts) {
      tl::CurvatureData cd =
          tl::curvature_data(chart, std::span<const double, 4>(x));
      tl::FramePoint fp = tl::frame_point(cd, spec->orientation_flip);
      tl::CurvatureBlocks bl = tl::curvature_blocks(fp.op);
      smin = std::min(smin, bl.scalar);
      smax = std::max(smax, bl.scalar);
      auto fr = [](const tl::Mat<double>& m) {
        double q = 0;
        for (double v : m.a) q += v * v;
        return std::sqrt(q);
      };
      bn = std::max(bn, fr(bl.B));
      wp = std::max(wp, fr(bl.wplus));
      wm = std::max(wm, fr(bl.wminus));
      ein = ein && bl.einstein;
      sd = sd && bl.self_dual;
      asd = asd && bl.anti_self_dual;
    }
    char line[240];
    std::snprintf(line, sizeof line,
                  "%-11s %-7d [%.6g, %.6g]%*s %.3e  %.3e  %.3e  %-9s %-10s %s\n",
                  spec->name.c_str(), static_cast<int>(pts.size()), smin, smax,
                  static_cast<int>(std::max<std::ptrdiff_t>(
                      0, 24 - std::snprintf(nullptr, 0, "[%.6g, %.6g]", smin,
                                            smax))),
                  "", bn, wp, wm, ein ? "yes" : "no", sd ? "yes" : "no",
                  asd ? "yes" : "no");
    s += line;
  }
  return s;
}

std::string list_text() {
  std::string s = "theorems:\n";
  for (const std::string& id : th::theorem_ids()) {
    s += "  " + id;
    if (!th::theorem_uses_n(id)) s += "  (n fixed internally)";
    s += "\n";
  }
  s += "manifolds:\n";
  for (const tl::ManifoldSpec& m : tl::manifolds()) {
    char line[200];
    std::snprintf(line, sizeof line,
                  "  %-11s einstein=%-3s self_dual=%-3s scalar=%g\n",
                  m.name.c_str(), m.einstein ? "yes" : "no",
                  m.self_dual ? "yes" : "no", m.scalar);
    s += line;
  }
  return s;
}

int write_output(const rp::RunConfig& cfg, const std::string& payload) {
  if (cfg.out.empty()) {
    std::fwrite(payload.data(), 1, payload.size(), stdout);
    return 0;
  }
  std::ofstream f(cfg.out, std::ios::binary);
  if (!f) {
    std::cerr << "error: cannot write output file " << cfg.out << "\n";
    return 2;
  }
  f << payload;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for the twistor space of a 4-manifold"};
  app.require_subcommand(1);
  app.set_version_flag("--version", rp::kEngineVersion);

  std::vector<std::string> manifold_flag, tol_flag, verify_ids;
  std::vector<double> t_flag;
  std::vector<int> n_flag;
  int samples_flag = 0;
  std::uint64_t seed_flag = 0;
  std::string format_flag, config_flag, out_flag;
  bool timing_flag = false;

  std::vector<CLI::Option*> opts;
  auto add_common = [&](CLI::App* sub) {
    opts.push_back(sub->add_option("--manifold", manifold_flag,
                                   "catalogue entries (comma separated)")
                       ->delimiter(','));
    opts.push_back(sub->add_option("--t", t_flag,
                                   "fiber scales (comma separated, positive)")
                       ->delimiter(','));
    opts.push_back(sub->add_option(
                          "--n", n_flag,
                          "almost complex structure index, 1 or 2 (comma "
                          "separated)")
                       ->delimiter(','));
    opts.push_back(
        sub->add_option("--samples", samples_flag, "points per check"));
    opts.push_back(sub->add_option("--seed", seed_flag, "sampling seed"));
    opts.push_back(sub->add_option("--tol", tol_flag,
                                   "tolerance override, <check>=<value>"));
    opts.push_back(sub->add_option("--format", format_flag,
                                   "output format: json, csv, or text"));
    opts.push_back(
        sub->add_option("--config", config_flag, "JSON config file"));
    opts.push_back(sub->add_option("--out", out_flag, "output file path"));
    opts.push_back(sub->add_flag("--timing", timing_flag,
                                 "include wall time in JSON output"));
  };

  CLI::App* c_list = app.add_subcommand("list", "known theorem ids and manifolds");
  c_list->add_option("--out", out_flag, "output file path");
  std::vector<double> point_flag;
  CLI::App* c_dec = app.add_subcommand(
      "decompose", "curvature decomposition of the catalogue bases");
  c_dec->add_option("--point", point_flag,
                    "evaluate at one chart point x0,x1,x2,x3 instead of "
                    "sampling")
      ->delimiter(',');
  add_common(c_dec);
  CLI::App* c_ver =
      app.add_subcommand("verify", "check one or more theorems");
  c_ver->add_option("ids", verify_ids, "theorem ids")->required();
  add_common(c_ver);
  CLI::App* c_sui = app.add_subcommand("suite", "run every applicable check");
  add_common(c_sui);
  CLI::App* c_ora = app.add_subcommand(
      "oracle", "finite-difference cross-check of the jet pipeline");
  add_common(c_ora);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  rp::RunConfig cfg;
  try {
    if (!config_flag.empty()) cfg = rp::load_config(config_flag);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  CLI::App* sub = app.get_subcommands().front();
  cfg.command = sub->get_name();
  auto given = [&](const char* name) {
    const CLI::Option* o = sub->get_option_no_throw(name);
    return o != nullptr && o->count() > 0;
  };
  if (given("--manifold")) cfg.manifolds = manifold_flag;
  if (given("--t")) cfg.t_values = t_flag;
  if (given("--n")) cfg.n_values = n_flag;
  if (given("--samples")) cfg.samples = samples_flag;
  if (given("--seed")) cfg.seed = seed_flag;
  if (given("--format")) cfg.format = format_flag;
  if (given("--out") || sub == c_list) cfg.out = out_flag;
  if (given("--timing")) cfg.timing = timing_flag;
  if (sub == c_ver) cfg.theorems = verify_ids;
  if (given("--tol")) {
    for (const std::string& e : tol_flag) {
      auto eq = e.find('=');
      double v = 0;
      if (eq == std::string::npos ||
          std::sscanf(e.c_str() + eq + 1, "%lf", &v) != 1 || !(v > 0)) {
        std::cerr << "error: --tol expects <check>=<positive value>, got '"
                  << e << "'\n";
        return 2;
      }
      cfg.tol[e.substr(0, eq)] = v;
    }
  }

  if (cfg.format != "json" && cfg.format != "csv" && cfg.format != "text") {
    std::cerr << "error: format must be json, csv, or text\n";
    return 2;
  }
  if (cfg.samples < 1) {
    std::cerr << "error: samples must be at least 1\n";
    return 2;
  }
  for (double t : cfg.t_values)
    if (!(t > 0)) {
      std::cerr << "error: t values must be positive\n";
      return 2;
    }
  for (int n : cfg.n_values)
    if (n != 1 && n != 2) {
      std::cerr << "error: n must be 1 or 2\n";
      return 2;
    }

  std::vector<const tl::ManifoldSpec*> mans;
  if (cfg.manifolds.empty()) {
    for (const tl::ManifoldSpec& m : tl::manifolds()) mans.push_back(&m);
  } else {
    for (const std::string& name : cfg.manifolds) {
      const tl::ManifoldSpec* m = tl::find_manifold(name);
      if (!m) {
        std::cerr << "error: unknown manifold '" << name << "'\n";
        return 2;
      }
      mans.push_back(m);
    }
  }

  std::vector<std::string> ids =
      cfg.theorems.empty() ? th::theorem_ids() : cfg.theorems;
  for (const std::string& id : ids)
    if (!th::known_theorem(id)) {
      std::cerr << "error: unknown theorem id '" << id << "'\n";
      return 2;
    }

  if (sub == c_list) return write_output(cfg, list_text());
  if (sub == c_dec) {
    if (!point_flag.empty() && point_flag.size() != 4) {
      std::cerr << "error: --point needs exactly four coordinates\n";
      return 2;
    }
    return write_output(cfg, decompose_text(cfg, mans, point_flag));
  }

  auto start = std::chrono::steady_clock::now();
  std::vector<th::DefectReport> rows;
  if (sub == c_ora) {
    std::vector<double> ts = cfg.t_values.empty() ? std::vector<double>{1.0}
                                                  : cfg.t_values;
    rows = run_oracle(cfg, mans, ts);
  } else {
    std::vector<Job> jobs;
    std::vector<int> ns = cfg.n_values.empty() ? std::vector<int>{1, 2}
                                               : cfg.n_values;
    for (const tl::ManifoldSpec* m : mans)
      for (const std::string& id : ids) {
        // a defaulted manifold list silently narrows to applicable bases;
        // an explicit request for an inapplicable one is a usage error
        if (cfg.manifolds.empty() && !th::theorem_applicable(id, *m)) continue;
        std::vector<double> ts =
            cfg.t_values.empty() ? default_t_sweep(*m) : cfg.t_values;
        for (double t : ts) {
          if (th::theorem_uses_n(id))
            for (int n : ns) jobs.push_back({id, m, t, n});
          else
            jobs.push_back({id, m, t, ns.front()});
        }
      }
    std::string error;
    rows = run_jobs(jobs, cfg, error);
    if (!error.empty()) {
      std::cerr << "error: " << error << "\n";
      return 2;
    }
  }
  double wall_ms = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - start)
                       .count();

  std::string payload;
  if (cfg.format == "json")
    payload = rp::to_json(cfg, rows, wall_ms);
  else if (cfg.format == "csv")
    payload = rp::to_csv(rows);
  else
    payload = rp::to_text(rows);
  int rc = write_output(cfg, payload);
  if (rc) return rc;

  int fails = 0, warns = 0;
  for (const th::DefectReport& r : rows) {
    if (r.verdict == "fail") ++fails;
    if (r.verdict == "warn") ++warns;
  }
  if (warns && cfg.format != "text")
    std::cerr << "note: " << warns
              << " check(s) landed between the pass and fail thresholds\n";
  return fails ? 1 : 0;
}
