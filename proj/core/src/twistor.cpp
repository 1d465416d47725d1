#include "twistorlab/twistor.hpp"

#include <cmath>
#include <stdexcept>

namespace twistorlab {

namespace {

Mat<double> values_of(const Mat<Jet>& m) {
  Mat<double> out(m.rows, m.cols);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) out(i, j) = m(i, j).value();
  return out;
}

}  // namespace

TwistorPoint make_twistor_point(const MetricChart& base,
                                std::span<const double, 4> x, double u,
                                double v, const TwistorParams& prm) {
  if (base.dim != 4)
    throw std::invalid_argument("make_twistor_point: base must be 4-dimensional");
  if (prm.n != 1 && prm.n != 2)
    throw std::invalid_argument("make_twistor_point: n must be 1 or 2");
  if (!(prm.t > 0.0))
    throw std::invalid_argument("make_twistor_point: fiber scale t must be positive");

  TwistorPoint tp;
  tp.prm = prm;
  tp.fiber.south = prm.south;
  for (int i = 0; i < 4; ++i) tp.x[size_t(i)] = x[i];
  tp.u = u;
  tp.v = v;

  const int K = prm.order;
  const int KH = K + 1;
  const Jet zH = Jet::constant(6, KH, 0.0);
  const Jet zK = Jet::constant(6, K, 0.0);

  std::array<Jet, 6> seeds;
  for (int i = 0; i < 4; ++i) seeds[size_t(i)] = Jet::seed(6, KH, x[i], i);
  seeds[4] = Jet::seed(6, KH, u, 4);
  seeds[5] = Jet::seed(6, KH, v, 5);

  tp.g6 = base.components(std::span<const Jet>(seeds.data(), 4));
  Mat<Jet> gi6 = inverse(tp.g6);
  tp.E6 = orthonormal_frame(tp.g6, prm.flip);
  tp.Gamma6 = christoffel_jets(tp.g6, gi6);

  Mat<Jet> gt(4, 4, zK), Et(4, 4, zK);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      gt(i, j) = tp.g6(i, j).truncated(K);
      Et(i, j) = tp.E6(i, j).truncated(K);
    }

  // frame connection along each base direction, column convention
  for (int i = 0; i < 4; ++i) {
    Mat<Jet> A(4, 4, zK);  // A(a,b) = component of nabla_i E_a along E_b
    for (int a = 0; a < 4; ++a) {
      std::array<Jet, 4> nab{zK, zK, zK, zK};
      for (int k = 0; k < 4; ++k) {
        Jet s = tp.E6(a, k).derivative(i);
        for (int m = 0; m < 4; ++m) s += tp.Gamma6(k, i, m) * Et(a, m);
        nab[size_t(k)] = s;
      }
      for (int b = 0; b < 4; ++b) {
        Jet s = zK;
        for (int k = 0; k < 4; ++k)
          for (int l = 0; l < 4; ++l) s += nab[size_t(k)] * gt(k, l) * Et(b, l);
        A(a, b) = s;
      }
    }
    Mat<Jet> M(4, 4, zK);  // endomorphism, column convention
    for (int a = 0; a < 4; ++a)
      for (int c = 0; c < 4; ++c) M(c, a) = A(a, c);
    tp.omega[size_t(i)] = Mat<Jet>(3, 3, zK);
    for (int j = 0; j < 3; ++j) {
      std::array<Jet, 6> w{zK, zK, zK, zK, zK, zK};
      w[size_t(3 + j)] = zK + 1.0;
      std::array<Jet, 6> dw = endo_derivation<Jet>(M, w);
      for (int k = 0; k < 3; ++k) tp.omega[size_t(i)](j, k) = dw[size_t(3 + k)];
    }
  }

  std::array<Jet, 3> yH = tp.fiber.y(seeds[4], seeds[5]);
  for (int k = 0; k < 3; ++k) tp.yj[size_t(k)] = yH[size_t(k)].truncated(K);

  tp.vmat = Mat<Jet>(3, 6, zK);
  for (int k = 0; k < 3; ++k) {
    for (int i = 0; i < 4; ++i) {
      Jet s = zK;
      for (int j = 0; j < 3; ++j) s += tp.yj[size_t(j)] * tp.omega[size_t(i)](j, k);
      tp.vmat(k, i) = s;
    }
    tp.vmat(k, 4) = yH[size_t(k)].derivative(4);
    tp.vmat(k, 5) = yH[size_t(k)].derivative(5);
  }

  tp.h = Mat<Jet>(6, 6, zK);
  for (int A = 0; A < 6; ++A)
    for (int B = 0; B <= A; ++B) {
      Jet s = (A < 4 && B < 4) ? gt(A, B) : zK;
      Jet vv = zK;
      for (int k = 0; k < 3; ++k) vv += tp.vmat(k, A) * tp.vmat(k, B);
      s += prm.t * vv;
      tp.h(A, B) = s;
      tp.h(B, A) = s;
    }

  // K_sigma on frame components at the fiber point
  const auto& Kc = fiber_complex_structures();
  Mat<Jet> Ks(4, 4, zK);
  for (int k = 0; k < 3; ++k)
    for (int b = 0; b < 4; ++b)
      for (int a = 0; a < 4; ++a)
        if (Kc[size_t(k)](b, a) != 0.0)
          Ks(b, a) += tp.yj[size_t(k)] * Kc[size_t(k)](b, a);

  const double vsign = prm.n == 1 ? -1.0 : 1.0;
  tp.J = Mat<Jet>(6, 6, zK);
  for (int B = 0; B < 6; ++B) {
    std::array<Jet, 4> Xp{zK, zK, zK, zK};
    if (B < 4) {
      std::array<Jet, 4> xf{zK, zK, zK, zK};
      for (int a = 0; a < 4; ++a) {
        Jet s = zK;
        for (int j = 0; j < 4; ++j) s += gt(B, j) * Et(a, j);
        xf[size_t(a)] = s;
      }
      std::array<Jet, 4> kxf{zK, zK, zK, zK};
      for (int b = 0; b < 4; ++b) {
        Jet s = zK;
        for (int a = 0; a < 4; ++a) s += Ks(b, a) * xf[size_t(a)];
        kxf[size_t(b)] = s;
      }
      for (int i = 0; i < 4; ++i) {
        Jet s = zK;
        for (int b = 0; b < 4; ++b) s += kxf[size_t(b)] * Et(b, i);
        Xp[size_t(i)] = s;
      }
    }
    std::array<Jet, 3> Vb{tp.vmat(0, B), tp.vmat(1, B), tp.vmat(2, B)};
    std::array<Jet, 3> Wp = cross3<Jet>(tp.yj, Vb);
    std::array<Jet, 3> dy{zK, zK, zK};
    for (int k = 0; k < 3; ++k) {
      Jet s = Wp[size_t(k)] * vsign;
      for (int i = 0; i < 4; ++i) s -= Xp[size_t(i)] * tp.vmat(k, i);
      dy[size_t(k)] = s;
    }
    std::array<Jet, 2> duv = tp.fiber.push_down<Jet>(tp.yj, dy);
    for (int i = 0; i < 4; ++i) tp.J(i, B) = Xp[size_t(i)];
    tp.J(4, B) = duv[0];
    tp.J(5, B) = duv[1];
  }

  tp.hval = values_of(tp.h);
  tp.Jval = values_of(tp.J);
  tp.gval = values_of(gt);
  tp.Eval = values_of(Et);
  tp.ginvval = values_of(gi6);
  tp.vval = values_of(tp.vmat);
  for (int k = 0; k < 3; ++k) tp.yval[size_t(k)] = tp.yj[size_t(k)].value();
  return tp;
}

std::array<double, 4> TwistorPoint::to_frame(
    std::span<const double, 4> xc) const {
  std::array<double, 4> out{};
  for (int a = 0; a < 4; ++a)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) out[size_t(a)] += xc[i] * gval(i, j) * Eval(a, j);
  return out;
}

std::array<double, 4> TwistorPoint::to_coord(
    std::span<const double, 4> xf) const {
  std::array<double, 4> out{};
  for (int i = 0; i < 4; ++i)
    for (int a = 0; a < 4; ++a) out[size_t(i)] += xf[a] * Eval(a, i);
  return out;
}

std::array<double, 4> TwistorPoint::k_sigma_coord(
    std::span<const double, 4> xc) const {
  std::array<double, 4> xf = to_frame(xc);
  Mat<double> K = FramePoint::k_sigma(yval);
  std::array<double, 4> kxf{};
  for (int b = 0; b < 4; ++b)
    for (int a = 0; a < 4; ++a) kxf[size_t(b)] += K(b, a) * xf[size_t(a)];
  return to_coord(kxf);
}

std::array<double, 6> TwistorPoint::lift_horizontal(
    std::span<const double, 4> xc) const {
  std::array<double, 3> dy{};
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 4; ++i) dy[size_t(k)] -= xc[i] * vval(k, i);
  std::array<double, 2> duv = fiber.push_down<double>(yval, dy);
  return {xc[0], xc[1], xc[2], xc[3], duv[0], duv[1]};
}

std::array<double, 6> TwistorPoint::lift_vertical(
    std::span<const double, 3> w) const {
  std::array<double, 3> dy{w[0], w[1], w[2]};
  std::array<double, 2> duv = fiber.push_down<double>(yval, dy);
  return {0.0, 0.0, 0.0, 0.0, duv[0], duv[1]};
}

VectorSplit TwistorPoint::split(std::span<const double, 6> T) const {
  VectorSplit out;
  for (int i = 0; i < 4; ++i) out.base[size_t(i)] = T[i];
  for (int k = 0; k < 3; ++k) {
    double s = 0.0;
    for (int A = 0; A < 6; ++A) s += vval(k, A) * T[A];
    out.vert[size_t(k)] = s;
  }
  return out;
}

double TwistorPoint::h_t(std::span<const double, 6> a,
                         std::span<const double, 6> b) const {
  double s = 0.0;
  for (int A = 0; A < 6; ++A)
    for (int B = 0; B < 6; ++B) s += a[A] * hval(A, B) * b[B];
  return s;
}

std::array<Jet, 6> TwistorPoint::horizontal_field(
    std::span<const Jet, 4> X) const {
  const Jet zK = h(0, 0) * 0.0;
  std::array<Jet, 3> dy{zK, zK, zK};
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 4; ++i) dy[size_t(k)] -= X[i] * vmat(k, i);
  std::array<Jet, 2> duv = fiber.push_down<Jet>(yj, dy);
  return {X[0], X[1], X[2], X[3], duv[0], duv[1]};
}

std::array<Jet, 6> TwistorPoint::vertical_field(
    std::span<const Jet, 3> W) const {
  const Jet zK = h(0, 0) * 0.0;
  std::array<Jet, 3> dy{W[0], W[1], W[2]};
  std::array<Jet, 2> duv = fiber.push_down<Jet>(yj, dy);
  return {zK, zK, zK, zK, duv[0], duv[1]};
}

std::array<double, 2> fiber_coords(const FiberChart& fc,
                                   std::span<const double, 3> y) {
  if (!fc.covers(y))
    throw std::invalid_argument("fiber_coords: point outside chart");
  return fc.uv_of<double>(y);
}

}  // namespace twistorlab
