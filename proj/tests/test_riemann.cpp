#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cmath>

#include "twistorlab/catalogue.hpp"
#include "twistorlab/riemann.hpp"

using namespace twistorlab;

namespace {
const std::array<double, 4> kX{0.21, -0.13, 0.08, 0.17};
const std::array<double, 4> kBump{0.1, -0.07, 0.12, 0.05};

CurvatureData data_of(const char* name, const std::array<double, 4>& x) {
  const ManifoldSpec* spec = find_manifold(name);
  REQUIRE(spec != nullptr);
  return curvature_data(chart_of(*spec), std::span<const double, 4>(x));
}
}  // namespace

TEST_CASE("flat chart has vanishing curvature") {
  CurvatureData cd = data_of("flat", kX);
  for (double v : cd.Riem.a) CHECK(std::abs(v) < 1e-14);
  CHECK(std::abs(cd.scalar) < 1e-13);
  for (double v : cd.nablaR.a) CHECK(std::abs(v) < 1e-13);
}

TEST_CASE("round sphere is Einstein with scalar 12") {
  CurvatureData cd = data_of("s4", kX);
  CHECK(cd.scalar == doctest::Approx(12.0).epsilon(1e-10));
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      CHECK(cd.ricci(i, j) ==
            doctest::Approx(3.0 * cd.g(i, j)).epsilon(1e-9).scale(1.0));
  // parallel curvature
  for (double v : cd.nablaR.a) CHECK(std::abs(v) < 1e-9);
}

TEST_CASE("lowered curvature has the classical symmetries") {
  CurvatureData cd = data_of("perturbed", kBump);
  double mag = 0;
  for (double v : cd.Riem.a) mag = std::max(mag, std::abs(v));
  CHECK(mag > 1e-3);  // the bump really curves the chart
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) {
          CHECK(std::abs(cd.Riem(i, j, k, l) + cd.Riem(j, i, k, l)) < 1e-10);
          CHECK(std::abs(cd.Riem(i, j, k, l) + cd.Riem(i, j, l, k)) < 1e-10);
          CHECK(std::abs(cd.Riem(i, j, k, l) - cd.Riem(k, l, i, j)) < 1e-10);
          double cyc = cd.Riem(i, j, k, l) + cd.Riem(j, k, i, l) +
                       cd.Riem(k, i, j, l);
          CHECK(std::abs(cyc) < 1e-10);
        }
}

TEST_CASE("covariant curvature derivative satisfies the cyclic identity") {
  CurvatureData cd = data_of("perturbed", kBump);
  double worst = 0;
  for (int e = 0; e < 4; ++e)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k)
          for (int l = 0; l < 4; ++l) {
            double cyc = cd.nablaR(e, i, j, k, l) + cd.nablaR(i, j, e, k, l) +
                         cd.nablaR(j, e, i, k, l);
            worst = std::max(worst, std::abs(cyc));
          }
  CHECK(worst < 1e-9);
}

TEST_CASE("christoffel jets are metric compatible") {
  const ManifoldSpec* spec = find_manifold("perturbed");
  MetricChart chart = chart_of(*spec);
  Mat<Jet> g = metric_jets(chart, std::span<const double>(kBump.data(), 4), 2);
  Mat<Jet> ginv = inverse(g);
  T3<Jet> Gam = christoffel_jets(g, ginv);
  double worst = 0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c) {
        double s = g(b, c).derivative(a).value();
        for (int e = 0; e < 4; ++e)
          s -= Gam(e, a, b).value() * g(e, c).value() +
               Gam(e, a, c).value() * g(b, e).value();
        worst = std::max(worst, std::abs(s));
      }
  CHECK(worst < 1e-12);
}

TEST_CASE("low jet order is rejected where derivatives are required") {
  const ManifoldSpec* spec = find_manifold("s4");
  MetricChart chart = chart_of(*spec);
  CHECK_THROWS(curvature_data(chart, std::span<const double, 4>(kX), 2));
}

TEST_CASE("block decomposition matches the catalogue predicates") {
  struct Row {
    const char* name;
    std::array<double, 4> x;
    bool einstein, sd, asd;
  };
  const Row rows[] = {
      {"flat", kX, true, true, true},
      {"s4", kX, true, true, true},
      {"h4", kX, true, true, true},
      {"cp2", kX, true, true, false},
      {"s2xs2", kX, true, false, false},
      {"perturbed", kBump, false, false, false},
  };
  for (const Row& r : rows) {
    const ManifoldSpec* spec = find_manifold(r.name);
    CurvatureData cd = data_of(r.name, r.x);
    FramePoint fp = frame_point(cd, spec->orientation_flip);
    CurvatureBlocks bl = curvature_blocks(fp.op);
    CAPTURE(r.name);
    CHECK(bl.einstein == r.einstein);
    CHECK(bl.self_dual == r.sd);
    CHECK(bl.anti_self_dual == r.asd);
    if (std::isfinite(spec->scalar))
      CHECK(bl.scalar == doctest::Approx(spec->scalar).epsilon(1e-8));
  }
}
