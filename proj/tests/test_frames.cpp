#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cmath>

#include "twistorlab/catalogue.hpp"
#include "twistorlab/frames.hpp"
#include "twistorlab/riemann.hpp"
#include "twistorlab/rng.hpp"

using namespace twistorlab;

namespace {
const std::array<double, 4> kX{0.1, -0.07, 0.12, 0.05};

FramePoint point_of(const char* name) {
  const ManifoldSpec* spec = find_manifold(name);
  REQUIRE(spec != nullptr);
  CurvatureData cd =
      curvature_data(chart_of(*spec), std::span<const double, 4>(kX));
  return frame_point(cd, spec->orientation_flip);
}

std::array<double, 4> rand4(SampleRng& rng) {
  std::array<double, 4> v;
  for (auto& e : v) e = rng.uniform(-1.0, 1.0);
  return v;
}
}  // namespace

TEST_CASE("frame is orthonormal and oriented") {
  const ManifoldSpec* spec = find_manifold("perturbed");
  CurvatureData cd =
      curvature_data(chart_of(*spec), std::span<const double, 4>(kX));
  FramePoint fp = frame_point(cd, false);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      double s = 0;
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
          s += fp.E(a, i) * cd.g(i, j) * fp.E(b, j);
      CHECK(s == doctest::Approx(a == b ? 1.0 : 0.0).scale(1.0).epsilon(1e-12));
    }
  // to_frame and to_coord invert each other
  SampleRng rng(11);
  std::array<double, 4> xc = rand4(rng);
  auto xf = fp.to_frame(std::span<const double>(xc.data(), 4));
  auto back = fp.to_coord(std::span<const double>(xf.data(), 4));
  for (int i = 0; i < 4; ++i) CHECK(back[i] == doctest::Approx(xc[i]));
}

TEST_CASE("curvature pairing against the two-form basis") {
  const ManifoldSpec* spec = find_manifold("perturbed");
  CurvatureData cd =
      curvature_data(chart_of(*spec), std::span<const double, 4>(kX));
  FramePoint fp = frame_point(cd, false);
  SampleRng rng(12);
  for (int it = 0; it < 4; ++it) {
    std::array<double, 4> xc = rand4(rng), yc = rand4(rng), zc = rand4(rng),
                          wc = rand4(rng);
    double direct = 0;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k)
          for (int l = 0; l < 4; ++l)
            direct += cd.Riem(i, j, k, l) * xc[i] * yc[j] * zc[k] * wc[l];
    auto xf = fp.to_frame(std::span<const double>(xc.data(), 4));
    auto yf = fp.to_frame(std::span<const double>(yc.data(), 4));
    auto zf = fp.to_frame(std::span<const double>(zc.data(), 4));
    auto wf = fp.to_frame(std::span<const double>(wc.data(), 4));
    auto w1 = FramePoint::wedge(std::span<const double, 4>(xf),
                                std::span<const double, 4>(yf));
    auto w2 = FramePoint::wedge(std::span<const double, 4>(zf),
                                std::span<const double, 4>(wf));
    auto ow = fp.op_apply(std::span<const double, 6>(w1));
    double paired = 0;
    for (int m = 0; m < 6; ++m) paired += ow[m] * w2[m];
    CHECK(paired == doctest::Approx(direct).epsilon(1e-11).scale(1.0));
  }
}

TEST_CASE("unit sphere curvature operator is twice the identity") {
  FramePoint fp = point_of("s4");
  CHECK(fp.scalar == doctest::Approx(12.0).epsilon(1e-10));
  for (int m = 0; m < 6; ++m)
    for (int n = 0; n < 6; ++n)
      CHECK(fp.op(m, n) ==
            doctest::Approx(m == n ? 2.0 : 0.0).scale(1.0).epsilon(1e-10));
}

TEST_CASE("fiber complex structures compose and pair correctly") {
  SampleRng rng(13);
  std::array<double, 3> sig{0.48, -0.6, 0.64};  // unit
  Mat<double> K = FramePoint::k_sigma(std::span<const double, 3>(sig));
  // skew and square to minus one for a unit direction
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      CHECK(K(i, j) == doctest::Approx(-K(j, i)).scale(1.0));
      double sq = 0;
      for (int m = 0; m < 4; ++m) sq += K(i, m) * K(m, j);
      CHECK(sq == doctest::Approx(i == j ? -1.0 : 0.0).scale(1.0));
    }
  // pairing with the anti-self-dual part of the wedge, weight two
  for (int it = 0; it < 3; ++it) {
    std::array<double, 4> xf = rand4(rng), yf = rand4(rng);
    double lhs = 0;
    for (int b = 0; b < 4; ++b) {
      double kx = 0;
      for (int a = 0; a < 4; ++a) kx += K(b, a) * xf[a];
      lhs += kx * yf[b];
    }
    auto w = FramePoint::wedge(std::span<const double, 4>(xf),
                               std::span<const double, 4>(yf));
    double rhs = 2.0 * (sig[0] * w[3] + sig[1] * w[4] + sig[2] * w[5]);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("endomorphisms act on wedges as derivations") {
  FramePoint fp = point_of("perturbed");
  SampleRng rng(14);
  std::array<double, 6> a6;
  for (auto& v : a6) v = rng.uniform(-1.0, 1.0);
  Mat<double> M = fp.curv_endo(std::span<const double, 6>(a6));
  std::array<double, 4> xf = rand4(rng), yf = rand4(rng);
  auto apply = [&](const std::array<double, 4>& v) {
    std::array<double, 4> o{};
    for (int b = 0; b < 4; ++b)
      for (int a = 0; a < 4; ++a) o[b] += M(b, a) * v[a];
    return o;
  };
  auto left = FramePoint::endo_action(
      M, FramePoint::wedge(std::span<const double, 4>(xf),
                           std::span<const double, 4>(yf)));
  auto mx = apply(xf);
  auto my = apply(yf);
  auto right1 = FramePoint::wedge(std::span<const double, 4>(mx),
                                  std::span<const double, 4>(yf));
  auto right2 = FramePoint::wedge(std::span<const double, 4>(xf),
                                  std::span<const double, 4>(my));
  for (int m = 0; m < 6; ++m)
    CHECK(left[m] ==
          doctest::Approx(right1[m] + right2[m]).epsilon(1e-12).scale(1.0));
}

TEST_CASE("fiber complement is an orthonormal completion") {
  SampleRng rng(15);
  for (int it = 0; it < 5; ++it) {
    std::array<double, 3> y = rng.fiber_direction();
    auto comp = fiber_complement(std::span<const double, 3>(y));
    for (int k = 0; k < 2; ++k) {
      double ny = 0, nk = 0;
      for (int i = 0; i < 3; ++i) {
        ny += comp[k][i] * y[i];
        nk += comp[k][i] * comp[k][i];
      }
      CHECK(std::abs(ny) < 1e-12);
      CHECK(nk == doctest::Approx(1.0));
    }
    double cross = 0;
    for (int i = 0; i < 3; ++i) cross += comp[0][i] * comp[1][i];
    CHECK(std::abs(cross) < 1e-12);
  }
}

TEST_CASE("orientation flip swaps the dual halves") {
  const ManifoldSpec* spec = find_manifold("cp2");
  CurvatureData cd =
      curvature_data(chart_of(*spec), std::span<const double, 4>(kX));
  CurvatureBlocks keep = curvature_blocks(frame_point(cd, false).op);
  CurvatureBlocks flip = curvature_blocks(frame_point(cd, true).op);
  CHECK(keep.self_dual);
  CHECK_FALSE(keep.anti_self_dual);
  CHECK(flip.anti_self_dual);
  CHECK_FALSE(flip.self_dual);
}
