#pragma once

#include <array>
#include <cmath>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "twistorlab/riemann.hpp"
#include "twistorlab/smallmat.hpp"

namespace twistorlab {

enum class MetricKind {
  Flat,
  Sphere,        // round, sectional curvature kappa > 0, conformal chart
  Hyperbolic,    // sectional curvature kappa < 0, Poincare ball
  FubiniStudy,   // complex projective plane, real coordinates (a1,b1,a2,b2)
  SphereProduct, // product of two round 2-spheres, unit radius each
  PerturbedFlat, // flat plus a compactly supported rank-one bump
};

struct ManifoldSpec {
  std::string name;
  MetricKind kind;
  double kappa = 0.0;       // sectional constant where meaningful
  double radius = 1.0;      // sampling ball radius in the chart
  bool orientation_flip = false;
  bool constant_curvature = false;
  bool einstein = false;
  bool self_dual = false;
  bool anti_self_dual = false;
  double scalar = 0.0;      // expected scalar curvature; NaN when it varies
};

const std::vector<ManifoldSpec>& manifolds();
// nullptr when the name is unknown.
const ManifoldSpec* find_manifold(std::string_view name);

MetricChart chart_of(const ManifoldSpec& spec);

std::vector<std::array<double, 4>> sample_points(const ManifoldSpec& spec,
                                                 int count, uint64_t seed);

// Metric components over any scalar type with jet-compatible arithmetic.
// This single source feeds the jet pipeline, plain evaluation, and the
// extended-precision finite-difference checks.
template <class S>
Mat<S> metric_components(MetricKind kind, double kappa, std::span<const S> x) {
  const S zero = x[0] * 0.0;
  Mat<S> g(4, 4, zero);
  switch (kind) {
    case MetricKind::Flat: {
      for (int i = 0; i < 4; ++i) g(i, i) = zero + 1.0;
      break;
    }
    case MetricKind::Sphere:
    case MetricKind::Hyperbolic: {
      S r2 = zero;
      for (int i = 0; i < 4; ++i) r2 += x[i] * x[i];
      S f = 1.0 + (0.25 * kappa) * r2;
      S w = 1.0 / (f * f);
      for (int i = 0; i < 4; ++i) g(i, i) = w;
      break;
    }
    case MetricKind::FubiniStudy: {
      // x = (a1, b1, a2, b2); scaled so the metric is Euclidean at 0
      const S& a1 = x[0];
      const S& b1 = x[1];
      const S& a2 = x[2];
      const S& b2 = x[3];
      S rho = 1.0 + a1 * a1 + b1 * b1 + a2 * a2 + b2 * b2;
      S inv = 1.0 / rho;
      S inv2 = inv * inv;
      const S* a[2] = {&a1, &a2};
      const S* b[2] = {&b1, &b2};
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) {
          S re = ((*a[k]) * (*a[l]) + (*b[k]) * (*b[l])) * inv2;
          if (k == l) re = inv - re;
          else re = zero - re;
          S im = zero - ((*a[k]) * (*b[l]) - (*b[k]) * (*a[l])) * inv2;
          g(2 * k, 2 * l) = re;          // a_k a_l
          g(2 * k + 1, 2 * l + 1) = re;  // b_k b_l
          g(2 * k, 2 * l + 1) = im;      // a_k b_l
          g(2 * l + 1, 2 * k) = im;
        }
      break;
    }
    case MetricKind::SphereProduct: {
      S r1 = x[0] * x[0] + x[1] * x[1];
      S r2 = x[2] * x[2] + x[3] * x[3];
      S f1 = 1.0 + r1;
      S f2 = 1.0 + r2;
      S w1 = 4.0 / (f1 * f1);
      S w2 = 4.0 / (f2 * f2);
      g(0, 0) = w1;
      g(1, 1) = w1;
      g(2, 2) = w2;
      g(3, 3) = w2;
      break;
    }
    case MetricKind::PerturbedFlat: {
      for (int i = 0; i < 4; ++i) g(i, i) = zero + 1.0;
      S r2 = zero;
      for (int i = 0; i < 4; ++i) r2 += x[i] * x[i];
      if (static_cast<double>(num::value_of(r2)) < 1.0) {
        S c = 1.0 - r2;
        S c2 = c * c;
        g(0, 0) += 0.1 * (c2 * c2);
      }
      break;
    }
  }
  return g;
}

}  // namespace twistorlab
