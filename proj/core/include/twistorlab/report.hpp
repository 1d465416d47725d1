#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "twistorlab/theorems.hpp"

namespace twistorlab::report {

inline constexpr const char* kEngineVersion = "0.1.0";

// One run of the tool: which checks, where, and how the output is shaped.
// A config file mirrors these fields; command-line flags override it.
struct RunConfig {
  std::string command = "suite";
  std::vector<std::string> theorems;   // empty: every known id
  std::vector<std::string> manifolds;  // empty: the whole catalogue
  std::vector<double> t_values;        // empty: per-manifold default sweep
  std::vector<int> n_values;           // empty: {1, 2}
  int samples = 30;
  std::uint64_t seed = 2026;
  std::map<std::string, double> tol;
  std::string format = "text";  // json | csv | text
  std::string out;              // empty: stdout
  bool timing = false;          // when false, wall_time_ms serializes as null
};

// Throws std::runtime_error on unreadable files, malformed JSON, unknown
// keys, or out-of-range values.
RunConfig load_config(const std::string& path);

// Deterministic serialization: keys in lexicographic order, floats printed
// with twelve significant digits, results in input order. wall_ms < 0 (or
// cfg.timing false) serializes wall_time_ms as null.
std::string to_json(const RunConfig& cfg,
                    const std::vector<theorems::DefectReport>& rows,
                    double wall_ms);
std::string to_csv(const std::vector<theorems::DefectReport>& rows);
std::string to_text(const std::vector<theorems::DefectReport>& rows);

}  // namespace twistorlab::report
