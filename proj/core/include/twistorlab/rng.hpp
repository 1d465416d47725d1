#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string_view>
#include <vector>

namespace twistorlab {

// Deterministic sampling helper. All randomness in the project flows through
// this so that a (seed, label) pair fully determines every sample on every
// platform: raw 64-bit streams come from SplitMix64 and uniform doubles are
// produced by explicit bit manipulation, never by distribution objects.
class SampleRng {
 public:
  explicit SampleRng(uint64_t seed) : state_(seed ^ 0x9e3779b97f4a7c15ull) {}

  // Stable sub-stream derivation, e.g. per theorem id and grid cell.
  static uint64_t derive(uint64_t seed, std::string_view label) {
    uint64_t h = 1469598103934665603ull ^ seed;
    for (char c : label) {
      h ^= static_cast<unsigned char>(c);
      h *= 1099511628211ull;
    }
    return h;
  }

  uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ull;
    uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform01();
  }

  // Uniform in the ball of given radius (rejection from the cube).
  std::vector<double> ball(int dim, double radius) {
    while (true) {
      std::vector<double> x(dim);
      double r2 = 0.0;
      for (int i = 0; i < dim; ++i) {
        x[i] = uniform(-1.0, 1.0);
        r2 += x[i] * x[i];
      }
      if (r2 <= 1.0) {
        for (double& xi : x) xi *= radius;
        return x;
      }
    }
  }

  // Uniform direction (rejection, no transcendentals).
  std::vector<double> unit(int dim) {
    while (true) {
      std::vector<double> x(dim);
      double r2 = 0.0;
      for (int i = 0; i < dim; ++i) {
        x[i] = uniform(-1.0, 1.0);
        r2 += x[i] * x[i];
      }
      if (r2 >= 0.04 && r2 <= 1.0) {
        double inv = 1.0 / std::sqrt(r2);
        for (double& xi : x) xi *= inv;
        return x;
      }
    }
  }

  // Fiber direction kept away from both stereographic poles so each patch
  // stays well conditioned.
  std::array<double, 3> fiber_direction(double max_axis = 0.6) {
    while (true) {
      auto y = unit(3);
      if (std::abs(y[2]) <= max_axis) return {y[0], y[1], y[2]};
    }
  }

 private:
  uint64_t state_;
};

}  // namespace twistorlab
