#include "twistorlab/hermitian.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace twistorlab::hermitian {

namespace {

double d1(const Jet& f, int var) { return f.derivative(var).value(); }

Mat<Jet> trunc(const Mat<Jet>& m, int ord) {
  Mat<Jet> out(m.rows, m.cols);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) out(i, j) = m(i, j).truncated(ord);
  return out;
}

}  // namespace

Mat<double> values_of(const Mat<Jet>& m) {
  Mat<double> out(m.rows, m.cols);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) out(i, j) = m(i, j).value();
  return out;
}

T3<double> values_of(const T3<Jet>& t) {
  T3<double> out(t.n, 0.0);
  for (size_t i = 0; i < t.a.size(); ++i) out.a[i] = t.a[i].value();
  return out;
}

T3<Jet> covariant_j(const Mat<Jet>& J, const T3<Jet>& Gamma) {
  const int n = J.rows;
  const int dim = J(0, 0).dim();
  const int ord = std::min(J(0, 0).order() - 1, Gamma(0, 0, 0).order());
  Mat<Jet> Jt = trunc(J, ord);
  T3<Jet> out(n, Jet::constant(dim, ord, 0.0));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        Jet s = J(a, c).derivative(b).truncated(ord);
        for (int e = 0; e < n; ++e)
          s += Gamma(a, b, e).truncated(ord) * Jt(e, c) -
               Gamma(e, b, c).truncated(ord) * Jt(a, e);
        out(a, b, c) = s;
      }
  return out;
}

Mat<Jet> kaehler_form(const Mat<Jet>& h, const Mat<Jet>& J) {
  const int n = h.rows;
  const int ord = std::min(h(0, 0).order(), J(0, 0).order());
  Mat<Jet> ht = trunc(h, ord), Jt = trunc(J, ord);
  Mat<Jet> out(n, n, Jet::constant(h(0, 0).dim(), ord, 0.0));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      Jet s = Jet::constant(h(0, 0).dim(), ord, 0.0);
      for (int c = 0; c < n; ++c) s += Jt(c, a) * ht(c, b);
      out(a, b) = s;
    }
  return out;
}

Vec<Jet> codifferential(const Mat<Jet>& hinv, const T3<Jet>& Gamma,
                        const Mat<Jet>& w) {
  const int n = w.rows;
  const int dim = w(0, 0).dim();
  const int ord = std::min(w(0, 0).order() - 1, Gamma(0, 0, 0).order());
  Mat<Jet> hi = trunc(hinv, ord), wt = trunc(w, ord);
  const Jet zero = Jet::constant(dim, ord, 0.0);
  // nab(a;b,c) = (nabla_a w)(b, c)
  T3<Jet> nab(n, zero);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        Jet s = w(b, c).derivative(a).truncated(ord);
        for (int d = 0; d < n; ++d)
          s -= Gamma(d, a, b).truncated(ord) * wt(d, c) +
               Gamma(d, a, c).truncated(ord) * wt(b, d);
        nab(a, b, c) = s;
      }
  Vec<Jet> out(n, zero);
  for (int c = 0; c < n; ++c) {
    Jet s = zero;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) s += hi(a, b) * nab(a, b, c);
    out[c] = -s;
  }
  return out;
}

Mat<double> exterior_d_values(std::span<const Jet> alpha) {
  const int n = int(alpha.size());
  Mat<double> out(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) out(a, b) = d1(alpha[b], a) - d1(alpha[a], b);
  return out;
}

T3<double> exterior_d_values(const Mat<Jet>& w) {
  const int n = w.rows;
  T3<double> out(n, 0.0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        out(a, b, c) =
            d1(w(b, c), a) - d1(w(a, c), b) + d1(w(a, b), c);
  return out;
}

T3<Jet> hat_connection(const T3<Jet>& Gamma, const T3<Jet>& DJ,
                       const Mat<Jet>& J) {
  const int n = J.rows;
  const int ord = DJ(0, 0, 0).order();
  Mat<Jet> Jt = trunc(J, ord);
  T3<Jet> out(n, Jet::constant(J(0, 0).dim(), ord, 0.0));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        Jet s = Gamma(a, b, c).truncated(ord);
        for (int d = 0; d < n; ++d) s += 0.5 * (DJ(a, b, d) * Jt(d, c));
        out(a, b, c) = s;
      }
  return out;
}

T3<Jet> s_lower(const Mat<Jet>& h, const Mat<Jet>& J, const T3<Jet>& DJ) {
  const int n = h.rows;
  const int dim = h(0, 0).dim();
  const int ord = DJ(0, 0, 0).order();
  const Jet zero = Jet::constant(dim, ord, 0.0);
  Mat<Jet> ht = trunc(h, ord), Jt = trunc(J, ord);
  // G(e;a,c) = [(nabla_a J)(J d_c)]^e, M(e;a,c) = [(nabla_{J d_a} J)(d_c)]^e
  T3<Jet> G(n, zero), M(n, zero);
  for (int e = 0; e < n; ++e)
    for (int a = 0; a < n; ++a)
      for (int c = 0; c < n; ++c) {
        Jet sg = zero, sm = zero;
        for (int d = 0; d < n; ++d) {
          sg += DJ(e, a, d) * Jt(d, c);
          sm += Jt(d, a) * DJ(e, d, c);
        }
        G(e, a, c) = sg;
        M(e, a, c) = sm;
      }
  T3<Jet> GL(n, zero), ML(n, zero);
  for (int a = 0; a < n; ++a)
    for (int c = 0; c < n; ++c)
      for (int b = 0; b < n; ++b) {
        Jet sg = zero, sm = zero;
        for (int e = 0; e < n; ++e) {
          sg += G(e, a, c) * ht(e, b);
          sm += M(e, a, c) * ht(e, b);
        }
        GL(a, c, b) = sg;
        ML(a, c, b) = sm;
      }
  T3<Jet> out(n, zero);
  for (int b = 0; b < n; ++b)
    for (int c = 0; c < n; ++c)
      for (int a = 0; a < n; ++a)
        out(b, c, a) =
            0.25 * (GL(a, c, b) - GL(c, a, b) - ML(a, c, b) + ML(c, a, b));
  return out;
}

T3<Jet> s_raise(const Mat<Jet>& hinv, const T3<Jet>& sl) {
  const int n = sl.n;
  const int ord = sl(0, 0, 0).order();
  Mat<Jet> hi = trunc(hinv, ord);
  T3<Jet> out(n, Jet::constant(sl(0, 0, 0).dim(), ord, 0.0));
  for (int e = 0; e < n; ++e)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        Jet s = Jet::constant(sl(0, 0, 0).dim(), ord, 0.0);
        for (int a = 0; a < n; ++a) s += hi(e, a) * sl(b, c, a);
        out(e, b, c) = s;
      }
  return out;
}

T3<Jet> canonical_connection(double u, const Mat<Jet>& h, const Mat<Jet>& hinv,
                             const Mat<Jet>& J, const T3<Jet>& Gamma,
                             const T3<Jet>& DJ) {
  const int n = h.rows;
  const int dim = h(0, 0).dim();
  const int ord = DJ(0, 0, 0).order();
  const Jet zero = Jet::constant(dim, ord, 0.0);
  Mat<Jet> ht = trunc(h, ord), hi = trunc(hinv, ord), Jt = trunc(J, ord);
  T3<Jet> G(n, zero), M(n, zero);
  for (int e = 0; e < n; ++e)
    for (int a = 0; a < n; ++a)
      for (int c = 0; c < n; ++c) {
        Jet sg = zero, sm = zero;
        for (int d = 0; d < n; ++d) {
          sg += DJ(e, a, d) * Jt(d, c);
          sm += Jt(d, a) * DJ(e, d, c);
        }
        G(e, a, c) = sg;
        M(e, a, c) = sm;
      }
  T3<Jet> GL(n, zero), ML(n, zero);
  for (int a = 0; a < n; ++a)
    for (int c = 0; c < n; ++c)
      for (int b = 0; b < n; ++b) {
        Jet sg = zero, sm = zero;
        for (int e = 0; e < n; ++e) {
          sg += G(e, a, c) * ht(e, b);
          sm += M(e, a, c) * ht(e, b);
        }
        GL(a, c, b) = sg;
        ML(a, c, b) = sm;
      }
  // lowered coefficients h(conn_b d_c, d_z)
  T3<Jet> low(n, zero);
  for (int b = 0; b < n; ++b)
    for (int c = 0; c < n; ++c)
      for (int z = 0; z < n; ++z) {
        Jet s = zero;
        for (int a = 0; a < n; ++a) s += Gamma(a, b, c).truncated(ord) * ht(a, z);
        s += 0.5 * GL(b, c, z);
        s += (u / 4.0) *
             (GL(z, c, b) - GL(c, z, b) - ML(z, c, b) + ML(c, z, b));
        low(b, c, z) = s;
      }
  T3<Jet> out(n, zero);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        Jet s = zero;
        for (int z = 0; z < n; ++z) s += hi(a, z) * low(b, c, z);
        out(a, b, c) = s;
      }
  return out;
}

T4<double> lower_curvature(const T4<double>& R, const Mat<double>& h) {
  const int n = R.n;
  T4<double> out(n, 0.0);
  for (int b = 0; b < n; ++b)
    for (int c = 0; c < n; ++c)
      for (int d = 0; d < n; ++d)
        for (int e = 0; e < n; ++e) {
          double s = 0.0;
          for (int a = 0; a < n; ++a) s += R(a, b, c, d) * h(a, e);
          out(b, c, d, e) = s;
        }
  return out;
}

T4<Jet> lower_curvature(const T4<Jet>& R, const Mat<Jet>& h) {
  const int n = R.n;
  const int ord = R(0, 0, 0, 0).order();
  Mat<Jet> ht = trunc(h, ord);
  T4<Jet> out(n, Jet::constant(R(0, 0, 0, 0).dim(), ord, 0.0));
  for (int b = 0; b < n; ++b)
    for (int c = 0; c < n; ++c)
      for (int d = 0; d < n; ++d)
        for (int e = 0; e < n; ++e) {
          Jet s = Jet::constant(R(0, 0, 0, 0).dim(), ord, 0.0);
          for (int a = 0; a < n; ++a) s += R(a, b, c, d) * ht(a, e);
          out(b, c, d, e) = s;
        }
  return out;
}

Mat<double> trace_form(const T4<double>& R4, const Mat<double>& hinv,
                       const Mat<double>& J) {
  const int n = R4.n;
  Mat<double> P(n, n, 0.0);
  for (int a = 0; a < n; ++a)
    for (int c = 0; c < n; ++c) {
      double s = 0.0;
      for (int b = 0; b < n; ++b) s += hinv(a, b) * J(c, b);
      P(a, c) = s;
    }
  Mat<double> out(n, n, 0.0);
  for (int A = 0; A < n; ++A)
    for (int B = 0; B < n; ++B) {
      double s = 0.0;
      for (int a = 0; a < n; ++a)
        for (int c = 0; c < n; ++c) s += P(a, c) * R4(A, B, a, c);
      out(A, B) = s;
    }
  return out;
}

Mat<Jet> trace_form(const T4<Jet>& R4, const Mat<Jet>& hinv,
                    const Mat<Jet>& J) {
  const int n = R4.n;
  const int ord = R4(0, 0, 0, 0).order();
  const Jet zero = Jet::constant(R4(0, 0, 0, 0).dim(), ord, 0.0);
  Mat<Jet> hi = trunc(hinv, ord), Jt = trunc(J, ord);
  Mat<Jet> P(n, n, zero);
  for (int a = 0; a < n; ++a)
    for (int c = 0; c < n; ++c) {
      Jet s = zero;
      for (int b = 0; b < n; ++b) s += hi(a, b) * Jt(c, b);
      P(a, c) = s;
    }
  Mat<Jet> out(n, n, zero);
  for (int A = 0; A < n; ++A)
    for (int B = 0; B < n; ++B) {
      Jet s = zero;
      for (int a = 0; a < n; ++a)
        for (int c = 0; c < n; ++c) s += P(a, c) * R4(A, B, a, c);
      out(A, B) = s;
    }
  return out;
}

Mat<double> phi_form(const Mat<double>& h, const Mat<double>& hinv,
                     const Mat<double>& J, const T3<double>& DJ) {
  const int n = h.rows;
  // GL(A,a,f) = h((nabla_A J)(J d_a), d_f)
  T3<double> GL(n, 0.0);
  for (int A = 0; A < n; ++A)
    for (int a = 0; a < n; ++a)
      for (int f = 0; f < n; ++f) {
        double s = 0.0;
        for (int e = 0; e < n; ++e)
          for (int d = 0; d < n; ++d) s += DJ(e, A, d) * J(d, a) * h(e, f);
        GL(A, a, f) = s;
      }
  Mat<double> out(n, n, 0.0);
  for (int A = 0; A < n; ++A)
    for (int B = 0; B < n; ++B) {
      double s = 0.0;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          for (int f = 0; f < n; ++f)
            s += hinv(a, b) * GL(A, a, f) * DJ(f, B, b);
      out(A, B) = s;
    }
  return out;
}

Mat<double> star_ricci(const T4<double>& R4, const Mat<double>& hinv,
                       const Mat<double>& J) {
  const int n = R4.n;
  Mat<double> W(n, n, 0.0);  // W(c,b) = hinv(a,b) J(c,a)
  for (int c = 0; c < n; ++c)
    for (int b = 0; b < n; ++b) {
      double s = 0.0;
      for (int a = 0; a < n; ++a) s += hinv(a, b) * J(c, a);
      W(c, b) = s;
    }
  Mat<double> out(n, n, 0.0);
  for (int A = 0; A < n; ++A)
    for (int B = 0; B < n; ++B) {
      double s = 0.0;
      for (int c = 0; c < n; ++c)
        for (int b = 0; b < n; ++b) {
          double inner = 0.0;
          for (int d = 0; d < n; ++d) inner += J(d, B) * R4(c, A, d, b);
          s += W(c, b) * inner;
        }
      out(A, B) = s;
    }
  return out;
}

Mat<double> compose_j(const Mat<double>& rho, const Mat<double>& J) {
  const int n = rho.rows;
  Mat<double> out(n, n, 0.0);
  for (int A = 0; A < n; ++A)
    for (int B = 0; B < n; ++B) {
      double s = 0.0;
      for (int c = 0; c < n; ++c) s += rho(A, c) * J(c, B);
      out(A, B) = s;
    }
  return out;
}

T3<Jet> nijenhuis(const Mat<Jet>& J, const T3<Jet>& DJ) {
  const int n = J.rows;
  const int ord = DJ(0, 0, 0).order();
  Mat<Jet> Jt = trunc(J, ord);
  T3<Jet> out(n, Jet::constant(J(0, 0).dim(), ord, 0.0));
  for (int A = 0; A < n; ++A)
    for (int B = 0; B < n; ++B)
      for (int C = 0; C < n; ++C) {
        Jet s = Jet::constant(J(0, 0).dim(), ord, 0.0);
        for (int e = 0; e < n; ++e)
          s += Jt(A, e) * (DJ(e, C, B) - DJ(e, B, C)) +
               Jt(e, B) * DJ(A, e, C) - Jt(e, C) * DJ(A, e, B);
        out(A, B, C) = s;
      }
  return out;
}

T4<double> covariant3_values(const T3<Jet>& F, const T3<double>& conn) {
  const int n = F.n;
  T3<double> Fv = values_of(F);
  T4<double> out(n, 0.0);
  for (int g = 0; g < n; ++g)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c) {
          double s = d1(F(a, b, c), g);
          for (int e = 0; e < n; ++e)
            s += conn(a, g, e) * Fv(e, b, c) - conn(e, g, b) * Fv(a, e, c) -
                 conn(e, g, c) * Fv(a, b, e);
          out(g, a, b, c) = s;
        }
  return out;
}

double type11_defect(const T4<double>& R4, const Mat<double>& J) {
  const int n = R4.n;
  double scale = 0.0;
  for (double v : R4.a) scale = std::max(scale, std::abs(v));
  T4<double> t(n, 0.0);
  for (int a = 0; a < n; ++a)
    for (int f = 0; f < n; ++f)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          double s = 0.0;
          for (int e = 0; e < n; ++e) s += J(e, a) * R4(e, f, c, d);
          t(a, f, c, d) = s;
        }
  double worst = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          double s = 0.0;
          for (int f = 0; f < n; ++f) s += J(f, b) * t(a, f, c, d);
          worst = std::max(worst, std::abs(s - R4(a, b, c, d)));
        }
  return worst / (1.0 + scale);
}

Mat<double> j_adapted_frame(const Mat<double>& h, const Mat<double>& J,
                            int start) {
  const int n = h.rows;
  if (n % 2 != 0) throw std::invalid_argument("j_adapted_frame: odd dimension");
  const int m = n / 2;
  Mat<double> E(n, n, 0.0);
  auto hdot = [&](std::span<const double> x, std::span<const double> y) {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) s += x[i] * h(i, j) * y[j];
    return s;
  };
  auto project_out = [&](std::vector<double>& v, int rows) {
    for (int r = 0; r < rows; ++r) {
      std::vector<double> row(size_t(n), 0.0);
      for (int j = 0; j < n; ++j) row[size_t(j)] = E(r, j);
      double d = hdot(v, row);
      for (int j = 0; j < n; ++j) v[size_t(j)] -= d * row[size_t(j)];
    }
  };
  int cursor = start, fails = 0;
  for (int k = 0; k < m; ++k) {
    std::vector<double> v;
    for (;;) {
      v.assign(size_t(n), 0.0);
      v[size_t(((cursor % n) + n) % n)] = 1.0;
      ++cursor;
      // previously accepted rows live at 0..k-1 and m..m+k-1
      for (int r = 0; r < k; ++r) {
        std::vector<double> row(size_t(n), 0.0), jro(size_t(n), 0.0);
        for (int j = 0; j < n; ++j) {
          row[size_t(j)] = E(r, j);
          jro[size_t(j)] = E(m + r, j);
        }
        double d = hdot(v, row);
        for (int j = 0; j < n; ++j) v[size_t(j)] -= d * row[size_t(j)];
        d = hdot(v, jro);
        for (int j = 0; j < n; ++j) v[size_t(j)] -= d * jro[size_t(j)];
      }
      double nn = hdot(v, v);
      if (nn > 1e-8) {
        double inv = 1.0 / std::sqrt(nn);
        for (double& c : v) c *= inv;
        break;
      }
      if (++fails > n)
        throw std::runtime_error("j_adapted_frame: no spanning start found");
    }
    std::vector<double> w(size_t(n), 0.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) w[size_t(i)] += J(i, j) * v[size_t(j)];
    for (int j = 0; j < n; ++j) E(k, j) = v[size_t(j)];
    // renormalize J v against accumulated drift
    for (int r = 0; r < k; ++r) {
      std::vector<double> row(size_t(n), 0.0), jro(size_t(n), 0.0);
      for (int j = 0; j < n; ++j) {
        row[size_t(j)] = E(r, j);
        jro[size_t(j)] = E(m + r, j);
      }
      double d = hdot(w, row);
      for (int j = 0; j < n; ++j) w[size_t(j)] -= d * row[size_t(j)];
      d = hdot(w, jro);
      for (int j = 0; j < n; ++j) w[size_t(j)] -= d * jro[size_t(j)];
    }
    double d = hdot(w, v);
    for (int j = 0; j < n; ++j) w[size_t(j)] -= d * v[size_t(j)];
    double nn = hdot(w, w);
    if (!(nn > 1e-8))
      throw std::runtime_error("j_adapted_frame: J image degenerate");
    double inv = 1.0 / std::sqrt(nn);
    for (int j = 0; j < n; ++j) E(m + k, j) = w[size_t(j)] * inv;
  }
  return E;
}

}  // namespace twistorlab::hermitian
