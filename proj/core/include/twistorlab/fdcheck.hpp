#pragma once

#include <functional>
#include <span>

#include "twistorlab/catalogue.hpp"
#include "twistorlab/frames.hpp"
#include "twistorlab/twistor.hpp"

namespace twistorlab::fd {

// Extended-precision curvature oracles. Everything here works on plain
// long double values and central differences; no jets are involved, so the
// results are an independent cross-check of the jet pipeline.

using MetricFn =
    std::function<Mat<long double>(std::span<const long double>)>;

// Chart metric of a catalogue entry as a long double evaluator.
MetricFn base_metric(const ManifoldSpec& spec);

// Components of h_t on the six-dimensional chart (x, u, v) of the twistor
// space, assembled from the base metric alone. The frame connection inside
// is computed by central differences with conn_step.
MetricFn twistor_metric(const ManifoldSpec& spec, const TwistorParams& prm,
                        long double conn_step = 1e-6L);

// Christoffel symbols Gamma(upper, direction, argument) by central
// differences of the metric components.
T3<long double> christoffel(const MetricFn& metric,
                            std::span<const long double> x, long double step);

// Lowered curvature R4(b, c, d, e) = h(R(d_b, d_c) d_d, d_e) with
// R(X, Y) = nabla_{[X,Y]} - [nabla_X, nabla_Y]. Christoffels use
// metric_step; their derivatives use gamma_step.
T4<long double> lowered_riemann(const MetricFn& metric,
                                std::span<const long double> x,
                                long double gamma_step,
                                long double metric_step);

}  // namespace twistorlab::fd
