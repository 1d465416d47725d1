#include "twistorlab/frames.hpp"

#include <cmath>
#include <cstdlib>

namespace twistorlab {

double determinant(Mat<double> A) {
  const int n = A.rows;
  double det = 1.0;
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(A(r, col)) > std::abs(A(piv, col))) piv = r;
    if (A(piv, col) == 0.0) return 0.0;
    if (piv != col) {
      for (int j = 0; j < n; ++j) std::swap(A(piv, j), A(col, j));
      det = -det;
    }
    det *= A(col, col);
    for (int r = col + 1; r < n; ++r) {
      double f = A(r, col) / A(col, col);
      for (int j = col; j < n; ++j) A(r, j) -= f * A(col, j);
    }
  }
  return det;
}

const Mat<double>& two_form_basis() {
  static const Mat<double> C = [] {
    Mat<double> m(6, 6, 0.0);
    // self-dual rows
    m(0, 0) = 1;  m(0, 5) = 1;   // e01 + e23
    m(1, 1) = 1;  m(1, 4) = -1;  // e02 - e13
    m(2, 2) = 1;  m(2, 3) = 1;   // e03 + e12
    // anti-self-dual rows
    m(3, 0) = 1;  m(3, 5) = -1;  // e01 - e23
    m(4, 1) = 1;  m(4, 4) = 1;   // e02 + e13
    m(5, 2) = 1;  m(5, 3) = -1;  // e03 - e12
    return m;
  }();
  return C;
}

const std::array<Mat<double>, 3>& fiber_complex_structures() {
  static const std::array<Mat<double>, 3> K = [] {
    std::array<Mat<double>, 3> k{Mat<double>(4, 4, 0.0),
                                 Mat<double>(4, 4, 0.0),
                                 Mat<double>(4, 4, 0.0)};
    k[0](0, 1) = -1; k[0](1, 0) = 1; k[0](2, 3) = 1;  k[0](3, 2) = -1;
    k[1](0, 2) = -1; k[1](1, 3) = -1; k[1](2, 0) = 1; k[1](3, 1) = 1;
    k[2](0, 3) = -1; k[2](1, 2) = 1; k[2](2, 1) = -1; k[2](3, 0) = 1;
    return k;
  }();
  return K;
}

SigmaPoint::SigmaPoint(std::array<double, 3> raw) : y(raw) {
  double r = std::sqrt(dot3(y, y));
  if (std::abs(r - 1.0) > 1e-8)
    throw std::invalid_argument("SigmaPoint: direction not on the unit sphere");
  for (double& c : y) c /= r;
}

std::array<std::array<double, 3>, 2> fiber_complement(
    std::span<const double, 3> y) {
  int m = 0;
  for (int k = 1; k < 3; ++k)
    if (std::abs(y[k]) < std::abs(y[m])) m = k;
  std::array<double, 3> c1{0.0, 0.0, 0.0};
  c1[m] = 1.0;
  double proj = y[m];
  for (int k = 0; k < 3; ++k) c1[k] -= proj * y[k];
  double n = std::sqrt(dot3(c1, c1));
  for (double& c : c1) c /= n;
  return {c1, cross(y, c1)};
}

std::array<double, 4> FramePoint::to_frame(
    std::span<const double> x_coord) const {
  std::array<double, 4> out{0.0, 0.0, 0.0, 0.0};
  for (int a = 0; a < 4; ++a)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) out[a] += x_coord[i] * g(i, j) * E(a, j);
  return out;
}

std::array<double, 4> FramePoint::to_coord(
    std::span<const double> x_frame) const {
  std::array<double, 4> out{0.0, 0.0, 0.0, 0.0};
  for (int i = 0; i < 4; ++i)
    for (int a = 0; a < 4; ++a) out[i] += x_frame[a] * E(a, i);
  return out;
}

std::array<double, 6> FramePoint::wedge(std::span<const double, 4> xf,
                                        std::span<const double, 4> yf) {
  const Mat<double>& C = two_form_basis();
  std::array<double, 6> out{};
  for (int m = 0; m < 6; ++m) {
    double s = 0.0;
    for (int p = 0; p < 6; ++p) {
      int a = kWedgePairs[p][0], b = kWedgePairs[p][1];
      s += C(m, p) * (xf[a] * yf[b] - xf[b] * yf[a]);
    }
    out[m] = 0.5 * s;
  }
  return out;
}

Mat<double> FramePoint::k_sigma(std::span<const double, 3> y) {
  const auto& K = fiber_complex_structures();
  Mat<double> out(4, 4, 0.0);
  for (int k = 0; k < 3; ++k)
    for (int b = 0; b < 4; ++b)
      for (int a = 0; a < 4; ++a) out(b, a) += y[k] * K[k](b, a);
  return out;
}

std::array<double, 6> FramePoint::op_apply(
    std::span<const double, 6> a) const {
  std::array<double, 6> out{};
  for (int m = 0; m < 6; ++m) {
    double s = 0.0;
    for (int n = 0; n < 6; ++n) s += op(m, n) * a[n];
    out[m] = s;
  }
  return out;
}

Mat<double> FramePoint::curv_endo(std::span<const double, 6> a) const {
  const Mat<double>& C = two_form_basis();
  // raw antisymmetric components over the ordered pairs
  std::array<double, 6> w{};
  for (int p = 0; p < 6; ++p) {
    double s = 0.0;
    for (int m = 0; m < 6; ++m) s += a[m] * C(m, p);
    w[p] = s;
  }
  Mat<double> out(4, 4, 0.0);  // out(d,c) = g(R(a) E_c, E_d)
  for (int c = 0; c < 4; ++c)
    for (int d = 0; d < 4; ++d) {
      double s = 0.0;
      for (int p = 0; p < 6; ++p)
        s += w[p] * Rf(kWedgePairs[p][0], kWedgePairs[p][1], c, d);
      out(d, c) = s;
    }
  return out;
}

std::array<double, 6> FramePoint::endo_action(const Mat<double>& S,
                                              std::span<const double, 6> w) {
  return endo_derivation<double>(S, w);
}

Mat<double> FramePoint::nabla_op(std::span<const double, 4> xf) const {
  const Mat<double>& C = two_form_basis();
  Mat<double> out(6, 6, 0.0);
  for (int m = 0; m < 6; ++m)
    for (int n = 0; n < 6; ++n) {
      double s = 0.0;
      for (int p = 0; p < 6; ++p)
        for (int q = 0; q < 6; ++q) {
          double r = 0.0;
          for (int e = 0; e < 4; ++e)
            r += xf[e] * nablaRf(e, kWedgePairs[p][0], kWedgePairs[p][1], kWedgePairs[q][0],
                                 kWedgePairs[q][1]);
          s += C(m, p) * C(n, q) * r;
        }
      out(m, n) = s;
    }
  return out;
}

}  // namespace twistorlab
