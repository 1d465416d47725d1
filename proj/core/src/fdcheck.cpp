#include "twistorlab/fdcheck.hpp"

#include <array>
#include <cmath>
#include <vector>

namespace twistorlab::fd {

namespace {

using LD = long double;

Mat<LD> metric_at(const MetricFn& metric, std::span<const LD> x) {
  return metric(x);
}

// d/dx_i of the metric by a central difference.
Mat<LD> metric_partial(const MetricFn& metric, std::span<const LD> x, int i,
                       LD step) {
  std::vector<LD> xp(x.begin(), x.end());
  std::vector<LD> xm(x.begin(), x.end());
  xp[size_t(i)] += step;
  xm[size_t(i)] -= step;
  Mat<LD> up = metric(xp);
  Mat<LD> dn = metric(xm);
  Mat<LD> out(up.rows, up.cols);
  for (int a = 0; a < up.rows; ++a)
    for (int b = 0; b < up.cols; ++b)
      out(a, b) = (up(a, b) - dn(a, b)) / (2.0L * step);
  return out;
}

}  // namespace

MetricFn base_metric(const ManifoldSpec& spec) {
  MetricKind kind = spec.kind;
  double kappa = spec.kappa;
  return [kind, kappa](std::span<const LD> x) {
    return metric_components<LD>(kind, kappa, x);
  };
}

MetricFn twistor_metric(const ManifoldSpec& spec, const TwistorParams& prm,
                        LD conn_step) {
  MetricFn base = base_metric(spec);
  FiberChart fc{prm.south};
  double t = prm.t;
  bool flip = prm.flip;
  return [base, fc, t, flip, conn_step](std::span<const LD> q) {
    std::array<LD, 4> x{q[0], q[1], q[2], q[3]};
    const LD u = q[4];
    const LD v = q[5];

    Mat<LD> g = base(x);
    Mat<LD> E = orthonormal_frame<LD>(g, flip);
    T3<LD> Gam = christoffel(base, x, conn_step);

    // connection of the anti-self-dual triple along each base direction
    std::array<Mat<LD>, 4> omega;
    for (int i = 0; i < 4; ++i) {
      std::array<LD, 4> xp = x;
      std::array<LD, 4> xm = x;
      xp[size_t(i)] += conn_step;
      xm[size_t(i)] -= conn_step;
      Mat<LD> Ep = orthonormal_frame<LD>(base(xp), flip);
      Mat<LD> Em = orthonormal_frame<LD>(base(xm), flip);
      Mat<LD> A(4, 4, 0.0L);  // component of nabla_i E_a along E_b
      for (int a = 0; a < 4; ++a) {
        std::array<LD, 4> nab{};
        for (int k = 0; k < 4; ++k) {
          LD s = (Ep(a, k) - Em(a, k)) / (2.0L * conn_step);
          for (int m = 0; m < 4; ++m) s += Gam(k, i, m) * E(a, m);
          nab[size_t(k)] = s;
        }
        for (int b = 0; b < 4; ++b) {
          LD s = 0.0L;
          for (int k = 0; k < 4; ++k)
            for (int l = 0; l < 4; ++l) s += nab[size_t(k)] * g(k, l) * E(b, l);
          A(a, b) = s;
        }
      }
      Mat<LD> M(4, 4, 0.0L);
      for (int a = 0; a < 4; ++a)
        for (int c = 0; c < 4; ++c) M(c, a) = A(a, c);
      omega[size_t(i)] = Mat<LD>(3, 3, 0.0L);
      for (int j = 0; j < 3; ++j) {
        std::array<LD, 6> w{};
        w[size_t(3 + j)] = 1.0L;
        std::array<LD, 6> dw = endo_derivation<LD>(M, w);
        for (int k = 0; k < 3; ++k) omega[size_t(i)](j, k) = dw[size_t(3 + k)];
      }
    }

    std::array<LD, 3> y = fc.y(u, v);
    std::array<LD, 3> yu, yv;
    {
      std::array<LD, 3> p1 = fc.y(u + conn_step, v);
      std::array<LD, 3> m1 = fc.y(u - conn_step, v);
      std::array<LD, 3> p2 = fc.y(u, v + conn_step);
      std::array<LD, 3> m2 = fc.y(u, v - conn_step);
      for (int k = 0; k < 3; ++k) {
        yu[size_t(k)] = (p1[size_t(k)] - m1[size_t(k)]) / (2.0L * conn_step);
        yv[size_t(k)] = (p2[size_t(k)] - m2[size_t(k)]) / (2.0L * conn_step);
      }
    }

    // vertical component of each coordinate direction
    Mat<LD> vmat(3, 6, 0.0L);
    for (int k = 0; k < 3; ++k) {
      for (int i = 0; i < 4; ++i) {
        LD s = 0.0L;
        for (int j = 0; j < 3; ++j) s += y[size_t(j)] * omega[size_t(i)](j, k);
        vmat(k, i) = s;
      }
      vmat(k, 4) = yu[size_t(k)];
      vmat(k, 5) = yv[size_t(k)];
    }

    Mat<LD> h(6, 6, 0.0L);
    for (int A = 0; A < 6; ++A)
      for (int B = 0; B <= A; ++B) {
        LD s = (A < 4 && B < 4) ? g(A, B) : 0.0L;
        LD vv = 0.0L;
        for (int k = 0; k < 3; ++k) vv += vmat(k, A) * vmat(k, B);
        s += static_cast<LD>(t) * vv;
        h(A, B) = s;
        h(B, A) = s;
      }
    return h;
  };
}

T3<LD> christoffel(const MetricFn& metric, std::span<const LD> x, LD step) {
  Mat<LD> g = metric_at(metric, x);
  Mat<LD> gi = inverse(g);
  const int n = g.rows;
  std::vector<Mat<LD>> dg;
  dg.reserve(size_t(n));
  for (int i = 0; i < n; ++i) dg.push_back(metric_partial(metric, x, i, step));
  T3<LD> out(n, 0.0L);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        LD s = 0.0L;
        for (int l = 0; l < n; ++l)
          s += gi(k, l) * (dg[size_t(i)](j, l) + dg[size_t(j)](i, l) -
                           dg[size_t(l)](i, j));
        out(k, i, j) = 0.5L * s;
      }
  return out;
}

T4<LD> lowered_riemann(const MetricFn& metric, std::span<const LD> x,
                       LD gamma_step, LD metric_step) {
  Mat<LD> g = metric_at(metric, x);
  const int n = g.rows;
  T3<LD> Gam = christoffel(metric, x, metric_step);

  std::vector<T3<LD>> dGam;
  dGam.reserve(size_t(n));
  for (int b = 0; b < n; ++b) {
    std::vector<LD> xp(x.begin(), x.end());
    std::vector<LD> xm(x.begin(), x.end());
    xp[size_t(b)] += gamma_step;
    xm[size_t(b)] -= gamma_step;
    T3<LD> up = christoffel(metric, xp, metric_step);
    T3<LD> dn = christoffel(metric, xm, metric_step);
    T3<LD> d(n, 0.0L);
    for (int a = 0; a < n; ++a)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          d(a, i, j) = (up(a, i, j) - dn(a, i, j)) / (2.0L * gamma_step);
    dGam.push_back(std::move(d));
  }

  T4<LD> low(n, 0.0L);
  for (int b = 0; b < n; ++b)
    for (int c = 0; c < b; ++c)
      for (int d = 0; d < n; ++d) {
        std::array<LD, 8> up{};
        for (int a = 0; a < n; ++a) {
          LD s = dGam[size_t(b)](a, c, d) - dGam[size_t(c)](a, b, d);
          for (int e = 0; e < n; ++e)
            s += Gam(a, b, e) * Gam(e, c, d) - Gam(a, c, e) * Gam(e, b, d);
          up[size_t(a)] = -s;
        }
        for (int e = 0; e < n; ++e) {
          LD s = 0.0L;
          for (int a = 0; a < n; ++a) s += up[size_t(a)] * g(a, e);
          low(b, c, d, e) = s;
          low(c, b, d, e) = -s;
        }
      }
  return low;
}

}  // namespace twistorlab::fd
