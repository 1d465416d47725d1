#pragma once

#include <array>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "twistorlab/jets.hpp"
#include "twistorlab/smallmat.hpp"

namespace twistorlab {

template <class S>
struct T3 {
  int n = 0;
  std::vector<S> a;
  T3() = default;
  T3(int n_, const S& fill) : n(n_), a(size_t(n_) * n_ * n_, fill) {}
  S& operator()(int i, int j, int k) { return a[(size_t(i) * n + j) * n + k]; }
  const S& operator()(int i, int j, int k) const {
    return a[(size_t(i) * n + j) * n + k];
  }
};

template <class S>
struct T4 {
  int n = 0;
  std::vector<S> a;
  T4() = default;
  T4(int n_, const S& fill) : n(n_), a(size_t(n_) * n_ * n_ * n_, fill) {}
  S& operator()(int i, int j, int k, int l) {
    return a[((size_t(i) * n + j) * n + k) * n + l];
  }
  const S& operator()(int i, int j, int k, int l) const {
    return a[((size_t(i) * n + j) * n + k) * n + l];
  }
};

template <class S>
struct T5 {
  int n = 0;
  std::vector<S> a;
  T5() = default;
  T5(int n_, const S& fill) : n(n_), a(size_t(n_) * n_ * n_ * n_ * n_, fill) {}
  S& operator()(int i, int j, int k, int l, int m) {
    return a[(((size_t(i) * n + j) * n + k) * n + l) * n + m];
  }
  const S& operator()(int i, int j, int k, int l, int m) const {
    return a[(((size_t(i) * n + j) * n + k) * n + l) * n + m];
  }
};

// Ordered index pairs (a<b) addressing the 6 independent components of a
// 2-form on a 4-manifold; every 6-component object below uses this order.
inline constexpr int kWedgePairs[6][2] = {{0, 1}, {0, 2}, {0, 3},
                                          {1, 2}, {1, 3}, {2, 3}};

double determinant(Mat<double> A);  // small dense, pivoted elimination

// Gram-Schmidt on the coordinate basis in index order. Row a of the result
// holds the coordinate components of frame vector a. The final vector is
// negated whenever the raw result disagrees with the requested orientation
// (`flip` selects the orientation opposite to the coordinate one).
template <class S>
Mat<S> orthonormal_frame(const Mat<S>& g, bool flip = false) {
  using std::sqrt;
  const int n = g.rows;
  const S zero = g(0, 0) * 0.0;
  Mat<S> E(n, n, zero);
  for (int a = 0; a < n; ++a) {
    std::vector<S> v(n, zero);
    v[a] = zero + 1.0;
    for (int b = 0; b < a; ++b) {
      S dot = zero;  // g(e_a, E_b)
      for (int j = 0; j < n; ++j) dot += g(a, j) * E(b, j);
      for (int j = 0; j < n; ++j) v[j] -= dot * E(b, j);
    }
    S norm2 = zero;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) norm2 += v[i] * g(i, j) * v[j];
    if (!(static_cast<double>(num::value_of(norm2)) > 0.0))
      throw std::domain_error("orthonormal_frame: metric not positive definite");
    S inv = 1.0 / sqrt(norm2);
    for (int j = 0; j < n; ++j) E(a, j) = v[j] * inv;
  }
  Mat<double> Ev(n, n);
  for (int a = 0; a < n; ++a)
    for (int j = 0; j < n; ++j)
      Ev(a, j) = static_cast<double>(num::value_of(E(a, j)));
  bool negative = determinant(Ev) < 0.0;
  if (negative != flip)
    for (int j = 0; j < n; ++j) E(n - 1, j) = -E(n - 1, j);
  return E;
}

// Unit 2-form basis over an oriented orthonormal frame: rows 0..2 self-dual,
// rows 3..5 anti-self-dual, expressed over the wedge pairs
// (01, 02, 03, 12, 13, 23). The inner product on 2-forms is the one that
// makes decomposable wedges of unit vectors have square norm 1/2, so these
// six rows are orthonormal.
const Mat<double>& two_form_basis();

// Constant matrices of the complex structures attached to the three
// anti-self-dual basis 2-forms, acting on frame components (column a maps to
// the image of frame vector a).
const std::array<Mat<double>, 3>& fiber_complex_structures();

// Unit anti-self-dual fiber direction. Components are taken in the
// anti-self-dual rows of two_form_basis().
struct SigmaPoint {
  std::array<double, 3> y;
  explicit SigmaPoint(std::array<double, 3> raw);  // normalizes, |1-|y||<1e-8
};

// Lookup from an unordered index pair into kWedgePairs plus the sign of the
// reordering; diagonal entries are unused.
inline constexpr int kPairIndex[4][4] = {{-1, 0, 1, 2},
                                         {0, -1, 3, 4},
                                         {1, 3, -1, 5},
                                         {2, 4, 5, -1}};
inline constexpr double kPairSign[4][4] = {{0, 1, 1, 1},
                                           {-1, 0, 1, 1},
                                           {-1, -1, 0, 1},
                                           {-1, -1, -1, 0}};

template <class S>
std::array<S, 3> cross3(std::span<const S, 3> a, std::span<const S, 3> b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
          a[0] * b[1] - a[1] * b[0]};
}

inline std::array<double, 3> cross(std::span<const double> a,
                                   std::span<const double> b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
          a[0] * b[1] - a[1] * b[0]};
}

inline double dot3(std::span<const double> a, std::span<const double> b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

inline double dot6(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (int i = 0; i < 6; ++i) s += a[i] * b[i];
  return s;
}

// Two unit 2-forms completing y to an oriented orthonormal basis of the
// anti-self-dual fiber; deterministic in y.
std::array<std::array<double, 3>, 2> fiber_complement(
    std::span<const double, 3> y);

// Derivation action of a skew endomorphism on a 2-form, both in frame
// components. Column convention: M maps frame vector a to sum_b M(b,a) E_b.
// Input and output 2-forms are 6-vectors over two_form_basis().
template <class S>
std::array<S, 6> endo_derivation(const Mat<S>& M, std::span<const S, 6> w) {
  const Mat<double>& C = two_form_basis();
  const S zero = w[0] * 0.0;
  std::array<S, 6> wp{zero, zero, zero, zero, zero, zero};
  for (int p = 0; p < 6; ++p)
    for (int m = 0; m < 6; ++m)
      if (C(m, p) != 0.0) wp[size_t(p)] += w[m] * C(m, p);
  auto W = [&wp, &zero](int i, int j) -> S {
    if (i == j) return zero;
    return wp[size_t(kPairIndex[i][j])] * kPairSign[i][j];
  };
  std::array<S, 6> out{zero, zero, zero, zero, zero, zero};
  for (int m = 0; m < 6; ++m) {
    S s = zero;
    for (int p = 0; p < 6; ++p) {
      if (C(m, p) == 0.0) continue;
      int a = kWedgePairs[p][0], b = kWedgePairs[p][1];
      S sw = zero;
      for (int e = 0; e < 4; ++e) sw += M(a, e) * W(e, b) + M(b, e) * W(a, e);
      s += sw * C(m, p);
    }
    out[size_t(m)] = s * 0.5;
  }
  return out;
}

// Pointwise curvature data expressed in an oriented orthonormal frame.
// Everything the closed-form side of the bundle identities consumes.
struct FramePoint {
  Mat<double> E;       // rows = frame vectors, coordinate components
  Mat<double> g;       // metric values in the coordinate basis
  T4<double> Rf;       // lowered curvature, frame components
  Mat<double> op;      // 6x6 curvature operator in the two_form_basis
  T5<double> nablaRf;  // covariant derivative of curvature, frame components
  double scalar = 0.0;

  std::array<double, 4> to_frame(std::span<const double> x_coord) const;
  std::array<double, 4> to_coord(std::span<const double> x_frame) const;

  // 2-form components (6-vector over two_form_basis) of X wedge Y.
  static std::array<double, 6> wedge(std::span<const double, 4> xf,
                                     std::span<const double, 4> yf);

  // Complex structure attached to sigma = sum y_k s_k, on frame components.
  static Mat<double> k_sigma(std::span<const double, 3> y);

  // Operator matrix applied to a 2-form: component m of R(a).
  std::array<double, 6> op_apply(std::span<const double, 6> a) const;

  // Skew endomorphism of tangent space induced by curvature on a 2-form a:
  // entry (c,d) = pairing of curvature on a with frame pair (c,d).
  Mat<double> curv_endo(std::span<const double, 6> a) const;

  // Derivation action of a skew endomorphism (frame components, column
  // convention S(E_a) = sum_b S(b,a) E_b) on a 2-form.
  static std::array<double, 6> endo_action(const Mat<double>& S,
                                           std::span<const double, 6> w);

  // 6x6 matrix of the covariant derivative of the curvature operator in
  // direction X (frame components).
  Mat<double> nabla_op(std::span<const double, 4> xf) const;
};

}  // namespace twistorlab
