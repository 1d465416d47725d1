#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace twistorlab {

// Dense truncated Taylor expansion of a smooth function of `dim` real
// variables, stored as normalized coefficients c_alpha = d^alpha f / alpha!
// in graded lexicographic order. Arithmetic truncates at `order`, so any
// rational/sqrt expression evaluated on seeded coordinates carries exact
// partial derivatives up to that order.
class Jet;

namespace detail {

// Shared index tables for one (dim, order) pair. Built once, cached forever.
struct JetTables {
  int dim = 0;
  int order = 0;
  int size = 0;                               // number of multi-indices
  std::vector<uint8_t> exponents;             // size*dim, row k = alpha_k
  std::vector<int> degree;                    // |alpha_k|
  // Ordered convolution pairs per target: product[k] lists all (i,j) with
  // alpha_i + alpha_j == alpha_k. Drives mul/div/sqrt/recip.
  std::vector<std::vector<std::pair<int, int>>> product;
  // shift_up[v][k] = index of alpha_k + e_v, or -1 past the truncation order.
  std::vector<std::vector<int>> shift_up;

  int index_of(std::span<const int> alpha) const;  // -1 if absent
};

const JetTables& jet_tables(int dim, int order);

// Coefficient remap from a lower-dimensional jet space into a bigger one.
// var_map[v] = target variable carrying source variable v.
std::vector<int> promotion_map(const JetTables& from, const JetTables& to,
                               std::span<const int> var_map);

}  // namespace detail

class Jet {
 public:
  Jet() = default;
  Jet(int dim, int order);  // zero jet

  static Jet constant(int dim, int order, double value);
  // Coordinate seed: value + unit first-order coefficient on `var`.
  static Jet seed(int dim, int order, double value, int var);

  bool valid() const { return tab_ != nullptr; }
  int dim() const { return tab_ ? tab_->dim : 0; }
  int order() const { return tab_ ? tab_->order : 0; }

  double value() const { return c_.empty() ? 0.0 : c_[0]; }
  // Normalized Taylor coefficient c_alpha.
  double coeff(std::span<const int> alpha) const;
  // Plain partial derivative d^alpha f = c_alpha * alpha!.
  double partial(std::span<const int> alpha) const;

  // Jet of df/dx_var, one order lower.
  Jet derivative(int var) const;
  Jet truncated(int new_order) const;
  // Re-embed into a jet space with new_dim >= dim; var_map[v] gives the
  // target slot of source variable v.
  Jet promoted(int new_dim, std::span<const int> var_map) const;

  Jet operator-() const;
  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator+=(double s);
  Jet& operator-=(double s);
  Jet& operator*=(double s);
  Jet& operator/=(double s);

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator+(Jet a, double s) { return a += s; }
  friend Jet operator+(double s, Jet a) { return a += s; }
  friend Jet operator-(Jet a, double s) { return a -= s; }
  friend Jet operator-(double s, const Jet& a) { return (-a) += s; }
  friend Jet operator*(Jet a, double s) { return a *= s; }
  friend Jet operator*(double s, Jet a) { return a *= s; }
  friend Jet operator/(Jet a, double s) { return a /= s; }

  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator/(const Jet& a, const Jet& b);
  friend Jet operator/(double s, const Jet& b);

  friend Jet sqrt(const Jet& a);
  friend Jet recip(const Jet& a);

  std::span<const double> coefficients() const { return c_; }

  std::string to_string() const;

 private:
  const detail::JetTables* tab_ = nullptr;
  std::vector<double> c_;

  void require_same(const Jet& o) const;
};

}  // namespace twistorlab
