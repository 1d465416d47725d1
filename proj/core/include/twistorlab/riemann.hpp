#pragma once

#include <array>
#include <functional>
#include <span>

#include "twistorlab/frames.hpp"
#include "twistorlab/jets.hpp"
#include "twistorlab/smallmat.hpp"

namespace twistorlab {

// A chart metric: symmetric positive matrix of jet-valued components as a
// function of jet-valued coordinates.
struct MetricChart {
  int dim = 4;
  std::function<Mat<Jet>(std::span<const Jet>)> components;
};

// Components of the metric as jets of the given order at x.
Mat<Jet> metric_jets(const MetricChart& chart, std::span<const double> x,
                     int order);

// Levi-Civita connection coefficients; first lower index is the direction.
// Output order is one less than the metric order.
T3<Jet> christoffel_jets(const Mat<Jet>& g, const Mat<Jet>& ginv);

// Curvature of a general connection given by coefficients A (direction
// first): sign convention matches commutator-minus-covariant ordering, i.e.
// R(x, y) = nabla_[x,y] - [nabla_x, nabla_y]. Index layout R(a; b, c, d):
// output a, 2-form slots b c, input d.
T4<Jet> connection_curvature_jets(const T3<Jet>& A);
// Same quantity at the point only (reads coefficient values and first
// partials from A; A must carry order >= 1).
T4<double> connection_curvature_values(const T3<Jet>& A);

// Everything downstream consumers need about the Levi-Civita curvature of a
// 4-dimensional chart metric at one point, in coordinate components.
struct CurvatureData {
  std::array<double, 4> x{};
  Mat<double> g, ginv;
  T3<double> Gamma;        // direction first
  T4<double> Riem;         // lowered (i, j, k, l): 2-form ij, input k, output l
  Mat<double> ricci;
  double scalar = 0.0;
  T5<double> nablaR;       // (e, i, j, k, l) = covariant e-derivative of Riem
};

// order is the jet order of the metric expansion; 4 suffices for nablaR.
CurvatureData curvature_data(const MetricChart& chart,
                             std::span<const double, 4> x, int order = 4);

// Oriented orthonormal frame plus curvature in frame components.
FramePoint frame_point(const CurvatureData& cd, bool flip = false);

// Block decomposition of the 6x6 curvature operator over two_form_basis():
// A acts on the self-dual rows, C on the anti-self-dual ones, B mixes them.
// Predicates use an absolute-plus-relative tolerance in the operator norm.
struct CurvatureBlocks {
  Mat<double> A, B, C;
  Mat<double> wplus, wminus;  // trace-free parts of A and C
  double scalar = 0.0;
  bool einstein = false;
  bool self_dual = false;
  bool anti_self_dual = false;
};

CurvatureBlocks curvature_blocks(const Mat<double>& op, double tol = 1e-9);

}  // namespace twistorlab
