#include "twistorlab/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace twistorlab::report {
namespace {

std::string jnum(double v) {
  if (!std::isfinite(v)) return "null";
  char b[40];
  std::snprintf(b, sizeof b, "%.12g", v);
  return b;
}

std::string jstr(const std::string& s) {
  std::string o = "\"";
  for (char ch : s) {
    switch (ch) {
      case '"': o += "\\\""; break;
      case '\\': o += "\\\\"; break;
      case '\n': o += "\\n"; break;
      case '\r': o += "\\r"; break;
      case '\t': o += "\\t"; break;
      default:
        if (static_cast<unsigned char>(ch) < 0x20) {
          char b[8];
          std::snprintf(b, sizeof b, "\\u%04x", ch);
          o += b;
        } else {
          o += ch;
        }
    }
  }
  o += '"';
  return o;
}

template <typename T, typename F>
std::string jarr(const std::vector<T>& v, F f) {
  std::string o = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) o += ", ";
    o += f(v[i]);
  }
  o += "]";
  return o;
}

std::string jarr(std::span<const double> v) {
  std::string o = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) o += ", ";
    o += jnum(v[i]);
  }
  o += "]";
  return o;
}

}  // namespace

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw std::runtime_error("malformed config " + path + ": " + e.what());
  }
  if (!j.is_object())
    throw std::runtime_error("config root must be a JSON object");
  RunConfig cfg;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& key = it.key();
    const nlohmann::json& v = it.value();
    try {
      if (key == "command")
        cfg.command = v.get<std::string>();
      else if (key == "theorems")
        cfg.theorems = v.get<std::vector<std::string>>();
      else if (key == "manifolds")
        cfg.manifolds = v.get<std::vector<std::string>>();
      else if (key == "t_values")
        cfg.t_values = v.get<std::vector<double>>();
      else if (key == "n_values")
        cfg.n_values = v.get<std::vector<int>>();
      else if (key == "samples")
        cfg.samples = v.get<int>();
      else if (key == "seed")
        cfg.seed = v.get<std::uint64_t>();
      else if (key == "tol") {
        if (!v.is_object())
          throw std::runtime_error("tol must map check ids to numbers");
        for (auto tt = v.begin(); tt != v.end(); ++tt)
          cfg.tol[tt.key()] = tt.value().get<double>();
      } else if (key == "format")
        cfg.format = v.get<std::string>();
      else if (key == "out")
        cfg.out = v.get<std::string>();
      else if (key == "timing")
        cfg.timing = v.get<bool>();
      else
        throw std::runtime_error("unknown key");
    } catch (const std::exception& e) {
      throw std::runtime_error("config key '" + key + "': " + e.what());
    }
  }
  if (cfg.format != "json" && cfg.format != "csv" && cfg.format != "text")
    throw std::runtime_error("format must be json, csv, or text");
  if (cfg.samples < 1) throw std::runtime_error("samples must be at least 1");
  for (int n : cfg.n_values)
    if (n != 1 && n != 2) throw std::runtime_error("n values must be 1 or 2");
  for (double t : cfg.t_values)
    if (!(t > 0.0)) throw std::runtime_error("t values must be positive");
  for (const auto& [k, val] : cfg.tol)
    if (!(val > 0.0)) throw std::runtime_error("tolerances must be positive");
  return cfg;
}

std::string to_json(const RunConfig& cfg,
                    const std::vector<theorems::DefectReport>& rows,
                    double wall_ms) {
  std::string s = "{\n  \"config\": {\n";
  s += "    \"command\": " + jstr(cfg.command) + ",\n";
  s += "    \"format\": " + jstr(cfg.format) + ",\n";
  s += "    \"manifolds\": " + jarr(cfg.manifolds, jstr) + ",\n";
  s += "    \"n_values\": " +
       jarr(cfg.n_values, [](int n) { return std::to_string(n); }) + ",\n";
  s += "    \"out\": " + jstr(cfg.out) + ",\n";
  s += "    \"samples\": " + std::to_string(cfg.samples) + ",\n";
  s += "    \"seed\": " + std::to_string(cfg.seed) + ",\n";
  s += "    \"t_values\": " + jarr(cfg.t_values, jnum) + ",\n";
  s += "    \"theorems\": " + jarr(cfg.theorems, jstr) + ",\n";
  s += "    \"timing\": " + std::string(cfg.timing ? "true" : "false") +
       ",\n";
  s += "    \"tol\": {";
  bool first = true;
  for (const auto& [k, v] : cfg.tol) {  // std::map iterates in key order
    if (!first) s += ", ";
    first = false;
    s += jstr(k) + ": " + jnum(v);
  }
  s += "}\n  },\n  \"results\": [\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const theorems::DefectReport& r = rows[i];
    s += "    {\"manifold\": " + jstr(r.manifold) +
         ", \"max_abs_residual\": " + jnum(r.max_abs_residual) +
         ", \"n\": " + std::to_string(r.n) + ", \"note\": " + jstr(r.note) +
         ", \"samples\": " + std::to_string(r.samples) +
         ", \"seed\": " + std::to_string(r.seed) + ", \"t\": " + jnum(r.t) +
         ", \"theorem\": " + jstr(r.theorem) +
         ", \"tolerance\": " + jnum(r.tolerance) +
         ", \"verdict\": " + jstr(r.verdict) + ", \"worst\": {\"sigma\": " +
         jarr(std::span<const double>(r.worst.sigma)) + ", \"vectors\": " +
         jarr(std::span<const double>(r.worst.vectors)) + ", \"x\": " +
         jarr(std::span<const double>(r.worst.x)) + "}}";
    if (i + 1 < rows.size()) s += ",";
    s += "\n";
  }
  s += "  ],\n  \"versions\": {\"compiler\": " + jstr(__VERSION__) +
       ", \"engine\": " + jstr(kEngineVersion) + "},\n";
  s += "  \"wall_time_ms\": ";
  s += (cfg.timing && wall_ms >= 0.0) ? jnum(wall_ms) : "null";
  s += "\n}\n";
  return s;
}

std::string to_csv(const std::vector<theorems::DefectReport>& rows) {
  std::string s =
      "theorem,manifold,t,n,samples,seed,max_abs_residual,tolerance,verdict,"
      "worst\n";
  for (const theorems::DefectReport& r : rows) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%.12g,%d,%d,%llu,%.12g,%.12g,", r.t, r.n,
                  r.samples, static_cast<unsigned long long>(r.seed),
                  r.max_abs_residual, r.tolerance);
    std::string worst = "x=(";
    for (int k = 0; k < 4; ++k) {
      char b[32];
      std::snprintf(b, sizeof b, "%s%.6g", k ? " " : "", r.worst.x[k]);
      worst += b;
    }
    worst += ") sigma=(";
    for (int k = 0; k < 3; ++k) {
      char b[32];
      std::snprintf(b, sizeof b, "%s%.6g", k ? " " : "", r.worst.sigma[k]);
      worst += b;
    }
    worst += ")";
    if (!r.worst.vectors.empty()) {
      worst += " v=(";
      for (std::size_t k = 0; k < r.worst.vectors.size(); ++k) {
        char b[32];
        std::snprintf(b, sizeof b, "%s%.6g", k ? " " : "",
                      r.worst.vectors[k]);
        worst += b;
      }
      worst += ")";
    }
    s += r.theorem + "," + r.manifold + "," + buf + r.verdict + ",\"" +
         worst + "\"\n";
  }
  return s;
}

std::string to_text(const std::vector<theorems::DefectReport>& rows) {
  std::string s;
  int pass = 0, fail = 0, warn = 0, skip = 0;
  for (const theorems::DefectReport& r : rows) {
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "%-44s %-10s t=%-6g n=%d s=%-3d %-5s res=%.3e tol=%.1e",
                  r.theorem.c_str(), r.manifold.c_str(), r.t, r.n, r.samples,
                  r.verdict.c_str(), r.max_abs_residual, r.tolerance);
    s += buf;
    if (!r.note.empty()) s += "  # " + r.note;
    s += "\n";
    if (r.verdict == "pass")
      ++pass;
    else if (r.verdict == "fail")
      ++fail;
    else if (r.verdict == "warn")
      ++warn;
    else
      ++skip;
  }
  char buf[128];
  std::snprintf(buf, sizeof buf,
                "%d checks: %d pass, %d warn, %d skip, %d fail\n",
                static_cast<int>(rows.size()), pass, warn, skip, fail);
  s += buf;
  return s;
}

}  // namespace twistorlab::report
