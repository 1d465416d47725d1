#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cmath>

#include "twistorlab/catalogue.hpp"
#include "twistorlab/fdcheck.hpp"
#include "twistorlab/hermitian.hpp"
#include "twistorlab/riemann.hpp"
#include "twistorlab/twistor.hpp"

using namespace twistorlab;

namespace {
double base_gap(const char* name, const std::array<long double, 4>& x) {
  const ManifoldSpec* spec = find_manifold(name);
  REQUIRE(spec != nullptr);
  fd::MetricFn m = fd::base_metric(*spec);
  T4<long double> fdR =
      fd::lowered_riemann(m, std::span<const long double>(x.data(), 4), 1e-4L,
                          1e-4L);
  std::array<double, 4> xd{double(x[0]), double(x[1]), double(x[2]),
                           double(x[3])};
  CurvatureData cd =
      curvature_data(chart_of(*spec), std::span<const double, 4>(xd));
  double gap = 0;
  for (int b = 0; b < 4; ++b)
    for (int c = 0; c < 4; ++c)
      for (int d = 0; d < 4; ++d)
        for (int e = 0; e < 4; ++e)
          gap = std::max(gap, std::abs(double(fdR(b, c, d, e)) -
                                       cd.Riem(b, c, d, e)));
  return gap;
}
}  // namespace

TEST_CASE("difference quotients confirm the jet curvature of the base") {
  const std::array<long double, 4> x{0.23L, -0.11L, 0.07L, 0.19L};
  CHECK(base_gap("flat", x) < 1e-10);
  CHECK(base_gap("s4", x) < 1e-5);
  CHECK(base_gap("perturbed", x) < 1e-4);
}

TEST_CASE("difference quotients confirm the bundle metric curvature") {
  const ManifoldSpec* spec = find_manifold("s4");
  REQUIRE(spec != nullptr);
  TwistorParams prm;
  prm.t = 0.8;
  std::array<double, 3> y{0.2, -0.5, -std::sqrt(0.71)};
  auto uv = fiber_coords(FiberChart{false}, std::span<const double, 3>(y));
  std::array<double, 4> x{0.15, -0.08, 0.21, 0.1};
  TwistorPoint tp = make_twistor_point(
      chart_of(*spec), std::span<const double, 4>(x), uv[0], uv[1], prm);
  Mat<Jet> hinv = inverse(tp.h);
  T3<Jet> Gam = christoffel_jets(tp.h, hinv);
  T4<double> jets = twistorlab::hermitian::lower_curvature(
      connection_curvature_values(Gam), tp.hval);

  fd::MetricFn m = fd::twistor_metric(*spec, prm);
  std::array<long double, 6> z{x[0], x[1], x[2], x[3], uv[0], uv[1]};
  T4<long double> fdR = fd::lowered_riemann(
      m, std::span<const long double>(z.data(), 6), 1e-3L, 1e-4L);
  double gap = 0;
  for (int b = 0; b < 6; ++b)
    for (int c = 0; c < 6; ++c)
      for (int d = 0; d < 6; ++d)
        for (int e = 0; e < 6; ++e)
          gap = std::max(gap,
                         std::abs(double(fdR(b, c, d, e)) - jets(b, c, d, e)));
  CHECK(gap < 1e-4);
}
