#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cmath>
#include <stdexcept>

#include "twistorlab/catalogue.hpp"
#include "twistorlab/rng.hpp"
#include "twistorlab/twistor.hpp"

using namespace twistorlab;

namespace {
std::array<double, 3> cross3(const std::array<double, 3>& a,
                             const std::array<double, 3>& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
          a[0] * b[1] - a[1] * b[0]};
}

std::array<double, 6> j_apply(const Mat<double>& J,
                              const std::array<double, 6>& a) {
  std::array<double, 6> o{};
  for (int A = 0; A < 6; ++A)
    for (int B = 0; B < 6; ++B) o[A] += J(A, B) * a[B];
  return o;
}

TwistorPoint point_on(const char* name, double t, int n,
                      const std::array<double, 3>& y) {
  const ManifoldSpec* spec = find_manifold(name);
  REQUIRE(spec != nullptr);
  TwistorParams prm;
  prm.t = t;
  prm.n = n;
  prm.flip = spec->orientation_flip;
  auto uv = fiber_coords(FiberChart{false}, std::span<const double, 3>(y));
  std::array<double, 4> x{0.14, -0.22, 0.05, 0.31};
  return make_twistor_point(chart_of(*spec), std::span<const double, 4>(x),
                            uv[0], uv[1], prm);
}
}  // namespace

TEST_CASE("stereographic fiber chart round trips") {
  for (bool south : {false, true}) {
    FiberChart fc{south};
    std::array<double, 3> y{0.36, -0.48, 0.8 * (south ? 1.0 : -1.0)};
    auto uv = fc.uv_of<double>(std::span<const double, 3>(y));
    auto back = fc.y(uv[0], uv[1]);
    for (int k = 0; k < 3; ++k) CHECK(back[k] == doctest::Approx(y[k]));
    auto y2 = fc.y(0.3, -0.7);
    CHECK(y2[0] * y2[0] + y2[1] * y2[1] + y2[2] * y2[2] ==
          doctest::Approx(1.0));
    auto uv2 = fc.uv_of<double>(std::span<const double, 3>(y2));
    CHECK(uv2[0] == doctest::Approx(0.3));
    CHECK(uv2[1] == doctest::Approx(-0.7));
  }
}

TEST_CASE("push_down is the chart differential on sphere tangents") {
  FiberChart fc{false};
  std::array<double, 3> y{0.36, -0.48, -0.8};
  std::array<double, 3> dy = cross3(y, {0.0, 0.0, 1.0});
  // curve s -> (y + s dy)/|y + s dy| stays on the sphere, velocity dy at 0
  Jet s = Jet::seed(1, 2, 0.0, 0);
  std::array<Jet, 3> ys;
  Jet n2 = Jet::constant(1, 2, 0.0);
  for (int k = 0; k < 3; ++k) {
    ys[k] = Jet::constant(1, 2, y[k]) + s * dy[k];
    n2 += ys[k] * ys[k];
  }
  Jet inv = recip(sqrt(n2));
  for (int k = 0; k < 3; ++k) ys[k] = ys[k] * inv;
  auto uv = fc.uv_of<Jet>(std::span<const Jet, 3>(ys));
  auto pd = fc.push_down<double>(std::span<const double, 3>(y),
                                 std::span<const double, 3>(dy));
  CHECK(uv[0].derivative(0).value() == doctest::Approx(pd[0]).epsilon(1e-12));
  CHECK(uv[1].derivative(0).value() == doctest::Approx(pd[1]).epsilon(1e-12));
}

TEST_CASE("chart refuses points at its pole") {
  FiberChart north{false};
  std::array<double, 3> pole{0.0, 0.0, 1.0};
  CHECK_FALSE(north.covers(std::span<const double, 3>(pole)));
  CHECK_THROWS_AS(
      fiber_coords(north, std::span<const double, 3>(pole)),
      std::invalid_argument);
  FiberChart south{true};
  CHECK(south.covers(std::span<const double, 3>(pole)));
}

TEST_CASE("bundle metric separates horizontal and vertical blocks") {
  SampleRng rng(21);
  for (double t : {0.5, 2.0}) {
    TwistorPoint tp = point_on("s4", t, 1, {0.2, 0.3, -std::sqrt(0.87)});
    std::array<double, 4> xc, yc;
    for (auto& e : xc) e = rng.uniform(-1.0, 1.0);
    for (auto& e : yc) e = rng.uniform(-1.0, 1.0);
    auto w1 = rng.fiber_direction();
    std::array<double, 3> v1 = cross3(tp.yval, w1);
    std::array<double, 3> v2 = cross3(tp.yval, {1.0, 0.0, 0.0});
    auto Xh = tp.lift_horizontal(std::span<const double, 4>(xc));
    auto Yh = tp.lift_horizontal(std::span<const double, 4>(yc));
    auto V1 = tp.lift_vertical(std::span<const double, 3>(v1));
    auto V2 = tp.lift_vertical(std::span<const double, 3>(v2));
    double gxy = 0;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) gxy += tp.gval(i, j) * xc[i] * yc[j];
    CHECK(tp.h_t(std::span<const double, 6>(Xh),
                 std::span<const double, 6>(Yh)) ==
          doctest::Approx(gxy).epsilon(1e-10));
    double dot = v1[0] * v2[0] + v1[1] * v2[1] + v1[2] * v2[2];
    CHECK(tp.h_t(std::span<const double, 6>(V1),
                 std::span<const double, 6>(V2)) ==
          doctest::Approx(t * dot).epsilon(1e-10).scale(1.0));
    CHECK(tp.h_t(std::span<const double, 6>(Xh),
                 std::span<const double, 6>(V1)) ==
          doctest::Approx(0.0).scale(1.0).epsilon(1e-10));
  }
}

TEST_CASE("almost complex structures square to minus one and are isometric") {
  SampleRng rng(22);
  for (int n : {1, 2}) {
    TwistorPoint tp = point_on("perturbed", 1.3, n, {0.1, -0.5, 0.6});
    std::array<double, 6> a, b;
    for (auto& e : a) e = rng.uniform(-1.0, 1.0);
    for (auto& e : b) e = rng.uniform(-1.0, 1.0);
    auto ja = j_apply(tp.Jval, a);
    auto jja = j_apply(tp.Jval, ja);
    for (int A = 0; A < 6; ++A)
      CHECK(jja[A] == doctest::Approx(-a[A]).epsilon(1e-10).scale(1.0));
    auto jb = j_apply(tp.Jval, b);
    CHECK(tp.h_t(std::span<const double, 6>(ja),
                 std::span<const double, 6>(jb)) ==
          doctest::Approx(tp.h_t(std::span<const double, 6>(a),
                                 std::span<const double, 6>(b)))
              .epsilon(1e-10)
              .scale(1.0));
  }
}

TEST_CASE("structure action on lifts matches the fiber data") {
  SampleRng rng(23);
  for (int n : {1, 2}) {
    TwistorPoint tp = point_on("h4", 0.8, n, {-0.3, 0.4, -std::sqrt(0.75)});
    std::array<double, 4> xc;
    for (auto& e : xc) e = rng.uniform(-1.0, 1.0);
    auto jh = j_apply(tp.Jval, tp.lift_horizontal(std::span<const double, 4>(xc)));
    auto kx = tp.k_sigma_coord(std::span<const double, 4>(xc));
    auto want = tp.lift_horizontal(std::span<const double, 4>(kx));
    for (int A = 0; A < 6; ++A)
      CHECK(jh[A] == doctest::Approx(want[A]).epsilon(1e-10).scale(1.0));

    std::array<double, 3> w = cross3(tp.yval, {0.0, 1.0, 0.0});
    auto jv = j_apply(tp.Jval, tp.lift_vertical(std::span<const double, 3>(w)));
    double sgn = (n == 1) ? -1.0 : 1.0;
    auto yw = cross3(tp.yval, w);
    std::array<double, 3> sw{sgn * yw[0], sgn * yw[1], sgn * yw[2]};
    auto wantv = tp.lift_vertical(std::span<const double, 3>(sw));
    for (int A = 0; A < 6; ++A)
      CHECK(jv[A] == doctest::Approx(wantv[A]).epsilon(1e-10).scale(1.0));
  }
}

TEST_CASE("split inverts the lifts") {
  TwistorPoint tp = point_on("s2xs2", 1.0, 1, {0.5, -0.1, -0.4});
  std::array<double, 4> xc{0.7, -0.2, 0.4, 0.1};
  std::array<double, 3> w = cross3(tp.yval, {0.2, 0.8, -0.3});
  auto Xh = tp.lift_horizontal(std::span<const double, 4>(xc));
  auto V = tp.lift_vertical(std::span<const double, 3>(w));
  std::array<double, 6> sum;
  for (int A = 0; A < 6; ++A) sum[A] = Xh[A] + V[A];
  VectorSplit sp = tp.split(std::span<const double, 6>(sum));
  for (int i = 0; i < 4; ++i)
    CHECK(sp.base[i] == doctest::Approx(xc[i]).epsilon(1e-10).scale(1.0));
  for (int k = 0; k < 3; ++k)
    CHECK(sp.vert[k] == doctest::Approx(w[k]).epsilon(1e-10).scale(1.0));
}

TEST_CASE("field lifts agree with pointwise lifts at the center") {
  TwistorPoint tp = point_on("cp2", 1.0, 2, {0.3, 0.1, -0.5});
  std::array<double, 4> xc{0.4, 0.9, -0.3, 0.2};
  std::array<Jet, 4> xj{Jet::constant(6, tp.prm.order, xc[0]),
                        Jet::constant(6, tp.prm.order, xc[1]),
                        Jet::constant(6, tp.prm.order, xc[2]),
                        Jet::constant(6, tp.prm.order, xc[3])};
  auto Xf = tp.horizontal_field(std::span<const Jet, 4>(xj));
  auto Xh = tp.lift_horizontal(std::span<const double, 4>(xc));
  for (int A = 0; A < 6; ++A)
    CHECK(Xf[A].value() == doctest::Approx(Xh[A]).epsilon(1e-12).scale(1.0));
  // connection data keeps enough jet depth for one curvature pass
  CHECK(tp.Gamma6(0, 0, 0).order() >= 2);
  CHECK(tp.h(0, 0).order() == tp.prm.order);
}
