#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "twistorlab/catalogue.hpp"

namespace twistorlab::theorems {

// Inputs of the sample where a check attained its worst residual.
struct WorstSample {
  std::array<double, 4> x{};
  std::array<double, 3> sigma{};
  std::vector<double> vectors;  // auxiliary draws, check-specific layout
};

struct DefectReport {
  std::string theorem;  // "<id>/<check>"
  std::string manifold;
  double t = 0.0;
  int n = 0;  // 0 when the result does not depend on the structure index
  int samples = 0;
  std::uint64_t seed = 0;  // derived per grid cell
  double max_abs_residual = 0.0;
  double tolerance = 0.0;
  std::string verdict;  // pass | fail | warn | skip
  WorstSample worst;
  std::string note;
};

struct VerifyParams {
  const ManifoldSpec* spec = nullptr;
  double t = 1.0;
  int n = 1;
  int samples = 30;
  std::uint64_t seed = 2026;
  // Keyed by "<id>" or "<id>/<check>"; overrides the pass tolerance.
  std::map<std::string, double> tol;
};

const std::vector<std::string>& theorem_ids();
bool known_theorem(const std::string& id);

// Whether the verified statements change with the structure index n.
bool theorem_uses_n(const std::string& id);

// Grid-level filter; run_theorem throws on a violated precondition.
bool theorem_applicable(const std::string& id, const ManifoldSpec& spec);

// Runs every check of one theorem id on one (manifold, t, n) cell.
// Deterministic given (spec, t, n, samples, seed).
std::vector<DefectReport> run_theorem(const std::string& id,
                                      const VerifyParams& p);

}  // namespace twistorlab::theorems
