#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace twistorlab {

// Minimal dense containers for the small dimensions used here (2..6).
// Templated on the scalar so the same geometry code runs on doubles,
// long doubles (finite-difference oracles) and jets.

template <class S>
struct Vec {
  std::vector<S> a;
  Vec() = default;
  explicit Vec(int n) : a(n) {}
  Vec(int n, const S& fill) : a(n, fill) {}
  Vec(std::initializer_list<S> init) : a(init) {}
  int size() const { return static_cast<int>(a.size()); }
  S& operator[](int i) { return a[i]; }
  const S& operator[](int i) const { return a[i]; }
};

template <class S>
struct Mat {
  int rows = 0, cols = 0;
  std::vector<S> a;
  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), a(r * c) {}
  Mat(int r, int c, const S& fill) : rows(r), cols(c), a(r * c, fill) {}
  S& operator()(int i, int j) { return a[i * cols + j]; }
  const S& operator()(int i, int j) const { return a[i * cols + j]; }
};

namespace num {
inline double value_of(double x) { return x; }
inline long double value_of(long double x) { return x; }
template <class S>
auto value_of(const S& x) -> decltype(x.value()) {
  return x.value();
}
}  // namespace num

// Solve A x = b by Gaussian elimination with partial pivoting on the scalar
// value part. A must be square and value-nonsingular.
template <class S>
Vec<S> solve(Mat<S> A, Vec<S> b) {
  const int n = A.rows;
  if (A.cols != n || b.size() != n)
    throw std::invalid_argument("solve: shape mismatch");
  for (int col = 0; col < n; ++col) {
    int piv = col;
    double best = std::abs(static_cast<double>(num::value_of(A(col, col))));
    for (int r = col + 1; r < n; ++r) {
      double cand = std::abs(static_cast<double>(num::value_of(A(r, col))));
      if (cand > best) {
        best = cand;
        piv = r;
      }
    }
    if (best == 0.0) throw std::domain_error("solve: singular matrix");
    if (piv != col) {
      for (int c = col; c < n; ++c) std::swap(A(col, c), A(piv, c));
      std::swap(b[col], b[piv]);
    }
    for (int r = col + 1; r < n; ++r) {
      S f = A(r, col) / A(col, col);
      for (int c = col; c < n; ++c) A(r, c) -= f * A(col, c);
      b[r] -= f * b[col];
    }
  }
  Vec<S> x(n);
  for (int r = n - 1; r >= 0; --r) {
    S acc = b[r];
    for (int c = r + 1; c < n; ++c) acc -= A(r, c) * x[c];
    x[r] = acc / A(r, r);
  }
  return x;
}

template <class S>
Mat<S> inverse(const Mat<S>& A) {
  const int n = A.rows;
  Mat<S> out(n, n);
  for (int col = 0; col < n; ++col) {
    Vec<S> e(n);
    for (int r = 0; r < n; ++r) e[r] = A(0, 0) * 0.0;  // typed zero
    e[col] = A(0, 0) * 0.0 + 1.0;
    Vec<S> x = solve(A, e);
    for (int r = 0; r < n; ++r) out(r, col) = x[r];
  }
  return out;
}

template <class S>
Mat<S> matmul(const Mat<S>& A, const Mat<S>& B) {
  if (A.cols != B.rows) throw std::invalid_argument("matmul: shape mismatch");
  Mat<S> out(A.rows, B.cols, A.a[0] * 0.0);
  for (int i = 0; i < A.rows; ++i)
    for (int k = 0; k < A.cols; ++k)
      for (int j = 0; j < B.cols; ++j) out(i, j) += A(i, k) * B(k, j);
  return out;
}

}  // namespace twistorlab
