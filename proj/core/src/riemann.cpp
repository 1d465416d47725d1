#include "twistorlab/riemann.hpp"

#include <cmath>
#include <mutex>
#include <stdexcept>

namespace twistorlab {

namespace {

double d1(const Jet& f, int v) {
  std::array<int, 8> a{};
  a[size_t(v)] = 1;
  return f.partial(std::span<const int>(a.data(), size_t(f.dim())));
}

CurvatureData compute(const MetricChart& chart, std::span<const double, 4> x,
                      int order) {
  if (chart.dim != 4)
    throw std::invalid_argument("curvature_data: base dimension must be 4");
  Mat<Jet> g = metric_jets(chart, x, order);
  Mat<Jet> gi = inverse(g);
  T3<Jet> Gam = christoffel_jets(g, gi);
  T4<Jet> Rup = connection_curvature_jets(Gam);

  const int rord = Rup(0, 0, 0, 0).order();
  Mat<Jet> glow(4, 4, Jet::constant(4, rord, 0.0));
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) glow(i, j) = g(i, j).truncated(rord);

  T4<Jet> Rlow(4, Jet::constant(4, rord, 0.0));
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) {
          Jet s = Jet::constant(4, rord, 0.0);
          for (int m = 0; m < 4; ++m) s += Rup(m, i, j, k) * glow(m, l);
          Rlow(i, j, k, l) = s;
        }

  CurvatureData cd;
  for (int i = 0; i < 4; ++i) cd.x[size_t(i)] = x[i];
  cd.g = Mat<double>(4, 4);
  cd.ginv = Mat<double>(4, 4);
  cd.Gamma = T3<double>(4, 0.0);
  cd.Riem = T4<double>(4, 0.0);
  cd.ricci = Mat<double>(4, 4, 0.0);
  cd.nablaR = T5<double>(4, 0.0);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      cd.g(i, j) = g(i, j).value();
      cd.ginv(i, j) = gi(i, j).value();
      for (int k = 0; k < 4; ++k) cd.Gamma(i, j, k) = Gam(i, j, k).value();
    }
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l)
          cd.Riem(i, j, k, l) = Rlow(i, j, k, l).value();

  for (int j = 0; j < 4; ++j)
    for (int l = 0; l < 4; ++l) {
      double s = 0.0;
      for (int i = 0; i < 4; ++i)
        for (int k = 0; k < 4; ++k) s += cd.ginv(i, k) * cd.Riem(i, j, k, l);
      cd.ricci(j, l) = s;
    }
  cd.scalar = 0.0;
  for (int j = 0; j < 4; ++j)
    for (int l = 0; l < 4; ++l) cd.scalar += cd.ginv(j, l) * cd.ricci(j, l);

  for (int e = 0; e < 4; ++e)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k)
          for (int l = 0; l < 4; ++l) {
            double s = d1(Rlow(i, j, k, l), e);
            for (int m = 0; m < 4; ++m)
              s -= cd.Gamma(m, e, i) * cd.Riem(m, j, k, l) +
                   cd.Gamma(m, e, j) * cd.Riem(i, m, k, l) +
                   cd.Gamma(m, e, k) * cd.Riem(i, j, m, l) +
                   cd.Gamma(m, e, l) * cd.Riem(i, j, k, m);
            cd.nablaR(e, i, j, k, l) = s;
          }
  return cd;
}

// Round metric of the unit 4-sphere in a stereographic chart; run once to
// guarantee the global sign convention (scalar curvature must come out +12,
// curvature operator twice the identity on 2-forms).
void sanity_check() {
  MetricChart sphere;
  sphere.dim = 4;
  sphere.components = [](std::span<const Jet> xs) {
    const int d = xs[0].dim(), o = xs[0].order();
    Jet r2 = Jet::constant(d, o, 0.0);
    for (int k = 0; k < 4; ++k) r2 += xs[k] * xs[k];
    Jet f = 1.0 + 0.25 * r2;
    Jet w = recip(f * f);
    Mat<Jet> g(4, 4, Jet::constant(d, o, 0.0));
    for (int i = 0; i < 4; ++i) g(i, i) = w;
    return g;
  };
  const std::array<double, 4> p{0.3, -0.1, 0.2, 0.4};
  CurvatureData cd = compute(sphere, p, 4);
  if (!(std::abs(cd.scalar - 12.0) < 1e-8))
    throw std::logic_error(
        "curvature pipeline self-check failed: round sphere scalar != 12");
  FramePoint fp = frame_point(cd);
  for (int m = 0; m < 6; ++m)
    for (int n = 0; n < 6; ++n) {
      double want = m == n ? 2.0 : 0.0;
      if (!(std::abs(fp.op(m, n) - want) < 1e-8))
        throw std::logic_error(
            "curvature pipeline self-check failed: sphere operator != 2 id");
    }
}

}  // namespace

Mat<Jet> metric_jets(const MetricChart& chart, std::span<const double> x,
                     int order) {
  if (int(x.size()) != chart.dim)
    throw std::invalid_argument("metric_jets: point dimension mismatch");
  std::vector<Jet> xs;
  xs.reserve(size_t(chart.dim));
  for (int v = 0; v < chart.dim; ++v)
    xs.push_back(Jet::seed(chart.dim, order, x[size_t(v)], v));
  Mat<Jet> g = chart.components(xs);
  if (g.rows != chart.dim || g.cols != chart.dim)
    throw std::logic_error("metric_jets: chart returned wrong shape");
  return g;
}

T3<Jet> christoffel_jets(const Mat<Jet>& g, const Mat<Jet>& ginv) {
  const int n = g.rows;
  const int dim = g(0, 0).dim();
  const int ord = g(0, 0).order() - 1;
  Mat<Jet> gi(n, n, Jet::constant(dim, ord, 0.0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) gi(i, j) = ginv(i, j).truncated(ord);
  // dg[v](i,j) = jet of d g_ij / d x_v
  std::vector<Mat<Jet>> dg(size_t(n), Mat<Jet>(n, n, Jet::constant(dim, ord, 0.0)));
  for (int v = 0; v < n; ++v)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) dg[size_t(v)](i, j) = g(i, j).derivative(v);
  T3<Jet> out(n, Jet::constant(dim, ord, 0.0));
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j <= i; ++j) {
        Jet s = Jet::constant(dim, ord, 0.0);
        for (int l = 0; l < n; ++l)
          s += gi(k, l) *
               (dg[size_t(i)](j, l) + dg[size_t(j)](i, l) - dg[size_t(l)](i, j));
        s *= 0.5;
        out(k, i, j) = s;
        out(k, j, i) = s;
      }
  return out;
}

T4<Jet> connection_curvature_jets(const T3<Jet>& A) {
  const int n = A.n;
  const int dim = A(0, 0, 0).dim();
  const int ord = A(0, 0, 0).order() - 1;
  T3<Jet> At(n, Jet::constant(dim, ord, 0.0));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) At(a, b, c) = A(a, b, c).truncated(ord);
  T4<Jet> out(n, Jet::constant(dim, ord, 0.0));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < b; ++c)
        for (int d = 0; d < n; ++d) {
          Jet s = A(a, c, d).derivative(b) - A(a, b, d).derivative(c);
          for (int e = 0; e < n; ++e)
            s += At(a, b, e) * At(e, c, d) - At(a, c, e) * At(e, b, d);
          out(a, b, c, d) = -s;
          out(a, c, b, d) = s;
        }
  return out;
}

T4<double> connection_curvature_values(const T3<Jet>& A) {
  const int n = A.n;
  T4<double> out(n, 0.0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < b; ++c)
        for (int d = 0; d < n; ++d) {
          double s = d1(A(a, c, d), b) - d1(A(a, b, d), c);
          for (int e = 0; e < n; ++e)
            s += A(a, b, e).value() * A(e, c, d).value() -
                 A(a, c, e).value() * A(e, b, d).value();
          out(a, b, c, d) = -s;
          out(a, c, b, d) = s;
        }
  return out;
}

CurvatureData curvature_data(const MetricChart& chart,
                             std::span<const double, 4> x, int order) {
  static std::once_flag checked;
  std::call_once(checked, sanity_check);
  return compute(chart, x, order);
}

FramePoint frame_point(const CurvatureData& cd, bool flip) {
  FramePoint fp;
  fp.g = cd.g;
  fp.E = orthonormal_frame(cd.g, flip);
  fp.scalar = cd.scalar;

  // stage the frame conversion one index at a time
  T4<double> t1(4, 0.0), t2(4, 0.0);
  for (int a = 0; a < 4; ++a)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) {
          double s = 0.0;
          for (int i = 0; i < 4; ++i) s += fp.E(a, i) * cd.Riem(i, j, k, l);
          t1(a, j, k, l) = s;
        }
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) {
          double s = 0.0;
          for (int j = 0; j < 4; ++j) s += fp.E(b, j) * t1(a, j, k, l);
          t2(a, b, k, l) = s;
        }
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c)
        for (int l = 0; l < 4; ++l) {
          double s = 0.0;
          for (int k = 0; k < 4; ++k) s += fp.E(c, k) * t2(a, b, k, l);
          t1(a, b, c, l) = s;
        }
  fp.Rf = T4<double>(4, 0.0);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c)
        for (int d = 0; d < 4; ++d) {
          double s = 0.0;
          for (int l = 0; l < 4; ++l) s += fp.E(d, l) * t1(a, b, c, l);
          fp.Rf(a, b, c, d) = s;
        }

  T5<double> u1(4, 0.0), u2(4, 0.0);
  for (int a = 0; a < 4; ++a)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k)
          for (int l = 0; l < 4; ++l) {
            double s = 0.0;
            for (int e = 0; e < 4; ++e)
              s += fp.E(a, e) * cd.nablaR(e, i, j, k, l);
            u1(a, i, j, k, l) = s;
          }
  auto contract = [](const Mat<double>& E, const T5<double>& in, int slot,
                     T5<double>& out) {
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        for (int c = 0; c < 4; ++c)
          for (int d = 0; d < 4; ++d)
            for (int e = 0; e < 4; ++e) {
              int idx[5] = {a, b, c, d, e};
              double s = 0.0;
              for (int m = 0; m < 4; ++m) {
                int src[5] = {a, b, c, d, e};
                src[slot] = m;
                s += E(idx[slot], m) * in(src[0], src[1], src[2], src[3], src[4]);
              }
              out(a, b, c, d, e) = s;
            }
  };
  contract(fp.E, u1, 1, u2);
  contract(fp.E, u2, 2, u1);
  contract(fp.E, u1, 3, u2);
  contract(fp.E, u2, 4, u1);
  fp.nablaRf = u1;

  const Mat<double>& C = two_form_basis();
  fp.op = Mat<double>(6, 6, 0.0);
  for (int m = 0; m < 6; ++m)
    for (int n = 0; n < 6; ++n) {
      double s = 0.0;
      for (int p = 0; p < 6; ++p)
        for (int q = 0; q < 6; ++q)
          s += C(m, p) * C(n, q) *
               fp.Rf(kWedgePairs[p][0], kWedgePairs[p][1], kWedgePairs[q][0],
                     kWedgePairs[q][1]);
      fp.op(m, n) = s;
    }
  return fp;
}

CurvatureBlocks curvature_blocks(const Mat<double>& op, double tol) {
  CurvatureBlocks cb;
  cb.A = Mat<double>(3, 3);
  cb.B = Mat<double>(3, 3);
  cb.C = Mat<double>(3, 3);
  double norm = 0.0;
  for (int m = 0; m < 6; ++m)
    for (int n = 0; n < 6; ++n) norm = std::max(norm, std::abs(op(m, n)));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      cb.A(i, j) = op(i, j);
      cb.B(i, j) = op(i, j + 3);
      cb.C(i, j) = op(i + 3, j + 3);
    }
  cb.scalar = 0.0;
  for (int m = 0; m < 6; ++m) cb.scalar += op(m, m);
  cb.wplus = cb.A;
  cb.wminus = cb.C;
  for (int i = 0; i < 3; ++i) {
    cb.wplus(i, i) -= cb.scalar / 6.0;
    cb.wminus(i, i) -= cb.scalar / 6.0;
  }
  const double eps = tol * (1.0 + norm);
  auto small = [eps](const Mat<double>& m) {
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        if (std::abs(m(i, j)) > eps) return false;
    return true;
  };
  cb.einstein = small(cb.B);
  cb.self_dual = small(cb.wminus);
  cb.anti_self_dual = small(cb.wplus);
  return cb;
}

}  // namespace twistorlab
