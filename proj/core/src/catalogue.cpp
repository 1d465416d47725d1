#include "twistorlab/catalogue.hpp"

#include <limits>

#include "twistorlab/rng.hpp"

namespace twistorlab {

const std::vector<ManifoldSpec>& manifolds() {
  static const std::vector<ManifoldSpec> table = [] {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<ManifoldSpec> t;
    t.push_back({"flat", MetricKind::Flat, 0.0, 2.0, false,
                 true, true, true, true, 0.0});
    t.push_back({"s4", MetricKind::Sphere, 1.0, 2.0, false,
                 true, true, true, true, 12.0});
    t.push_back({"s4_k2", MetricKind::Sphere, 2.0, 2.0, false,
                 true, true, true, true, 24.0});
    t.push_back({"h4", MetricKind::Hyperbolic, -1.0, 1.2, false,
                 true, true, true, true, -12.0});
    t.push_back({"cp2", MetricKind::FubiniStudy, 0.0, 0.9, false,
                 false, true, true, false, 24.0});
    t.push_back({"s2xs2", MetricKind::SphereProduct, 0.0, 1.0, false,
                 false, true, false, false, 4.0});
    t.push_back({"perturbed", MetricKind::PerturbedFlat, 0.0, 0.8, false,
                 false, false, false, false, nan});
    return t;
  }();
  return table;
}

const ManifoldSpec* find_manifold(std::string_view name) {
  for (const ManifoldSpec& m : manifolds())
    if (m.name == name) return &m;
  return nullptr;
}

MetricChart chart_of(const ManifoldSpec& spec) {
  MetricChart chart;
  chart.dim = 4;
  chart.components = [kind = spec.kind, kappa = spec.kappa](
                         std::span<const Jet> xs) {
    return metric_components<Jet>(kind, kappa, xs);
  };
  return chart;
}

std::vector<std::array<double, 4>> sample_points(const ManifoldSpec& spec,
                                                 int count, uint64_t seed) {
  SampleRng rng(SampleRng::derive(seed, spec.name));
  std::vector<std::array<double, 4>> pts;
  pts.reserve(size_t(count));
  for (int i = 0; i < count; ++i) {
    std::vector<double> p = rng.ball(4, spec.radius);
    pts.push_back({p[0], p[1], p[2], p[3]});
  }
  return pts;
}

}  // namespace twistorlab
