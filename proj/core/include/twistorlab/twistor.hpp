#pragma once

#include <array>
#include <span>

#include "twistorlab/frames.hpp"
#include "twistorlab/jets.hpp"
#include "twistorlab/riemann.hpp"
#include "twistorlab/smallmat.hpp"

namespace twistorlab {

// Stereographic chart on the fiber sphere of unit anti-self-dual 2-forms.
// "north" projects from y3 = +1 (covers y3 < 1), "south" from y3 = -1.
struct FiberChart {
  bool south = false;

  // +1 south, -1 north: the chart denominator is 1 + pole_sign()*y3.
  double pole_sign() const { return south ? 1.0 : -1.0; }

  template <class S>
  std::array<S, 3> y(const S& u, const S& v) const {
    S w = 1.0 + u * u + v * v;
    S inv = 1.0 / w;
    S y3 = (2.0 * inv - 1.0) * pole_sign();
    return {2.0 * u * inv, 2.0 * v * inv, y3};
  }

  template <class S>
  std::array<S, 2> uv_of(std::span<const S, 3> y) const {
    S denom = 1.0 + pole_sign() * y[2];
    return {y[0] / denom, y[1] / denom};
  }

  // Differential of uv_of at y applied to dy; exact on sphere tangents.
  template <class S>
  std::array<S, 2> push_down(std::span<const S, 3> y,
                             std::span<const S, 3> dy) const {
    S denom = 1.0 + pole_sign() * y[2];
    S inv = 1.0 / denom;
    S inv2 = inv * inv;
    S u = dy[0] * inv - pole_sign() * (y[0] * dy[2]) * inv2;
    S v = dy[1] * inv - pole_sign() * (y[1] * dy[2]) * inv2;
    return {u, v};
  }

  bool covers(std::span<const double, 3> y, double margin = 1e-3) const {
    return 1.0 + pole_sign() * y[2] > margin;
  }
};

struct TwistorParams {
  double t = 1.0;
  int n = 1;           // 1 or 2, selects the almost complex structure
  bool south = false;  // fiber chart
  bool flip = false;   // base frame orientation
  int order = 2;       // jet order of the assembled tensors
};

struct VectorSplit {
  std::array<double, 4> base{};  // coordinate components downstairs
  std::array<double, 3> vert{};  // covariant vertical part over the fiber basis
};

// One point of the twistor 6-manifold in chart coordinates (x, u, v),
// carrying the metric h_t and almost complex structure J_n as jets of order
// TwistorParams::order in all six variables, plus the connection data the
// closed-form sides of the identities consume.
struct TwistorPoint {
  TwistorParams prm;
  FiberChart fiber;
  std::array<double, 4> x{};
  double u = 0.0, v = 0.0;

  Mat<Jet> h;    // 6x6 metric
  Mat<Jet> J;    // 6x6, column convention J(d_B) = sum_A J(A,B) d_A

  Mat<Jet> g6;                     // base metric, one order higher
  Mat<Jet> E6;                     // orthonormal frame rows, one order higher
  T3<Jet> Gamma6;                  // base Christoffels
  std::array<Mat<Jet>, 4> omega;   // fiber-basis connection 1-form, 3x3 skew
  std::array<Jet, 3> yj;           // fiber point in the sphere
  Mat<Jet> vmat;                   // 3x6: vertical part of each d_A

  // value caches at the point
  Mat<double> hval, Jval;          // 6x6
  Mat<double> gval, Eval, ginvval; // 4x4
  Mat<double> vval;                // 3x6
  std::array<double, 3> yval{};

  std::array<double, 4> to_frame(std::span<const double, 4> xc) const;
  std::array<double, 4> to_coord(std::span<const double, 4> xf) const;
  // K_sigma at this fiber point acting on a coordinate vector downstairs.
  std::array<double, 4> k_sigma_coord(std::span<const double, 4> xc) const;

  std::array<double, 6> lift_horizontal(std::span<const double, 4> xc) const;
  // w must be tangent to the fiber sphere at yval.
  std::array<double, 6> lift_vertical(std::span<const double, 3> w) const;
  VectorSplit split(std::span<const double, 6> T) const;
  double h_t(std::span<const double, 6> a, std::span<const double, 6> b) const;

  // Jet-level lifts of fields given by jet components; the horizontal input
  // is a vector field downstairs, the vertical one a sphere-tangent section
  // over the fiber basis.
  std::array<Jet, 6> horizontal_field(std::span<const Jet, 4> X) const;
  std::array<Jet, 6> vertical_field(std::span<const Jet, 3> W) const;
};

TwistorPoint make_twistor_point(const MetricChart& base,
                                std::span<const double, 4> x, double u,
                                double v, const TwistorParams& prm);

// Chart coordinates of the fiber direction y, picking the pole that keeps
// the point well inside the chart.
std::array<double, 2> fiber_coords(const FiberChart& fc,
                                   std::span<const double, 3> y);

}  // namespace twistorlab
