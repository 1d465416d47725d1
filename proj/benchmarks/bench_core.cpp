#include <benchmark/benchmark.h>

#include <array>

#include "twistorlab/catalogue.hpp"
#include "twistorlab/frames.hpp"
#include "twistorlab/hermitian.hpp"
#include "twistorlab/riemann.hpp"
#include "twistorlab/theorems.hpp"
#include "twistorlab/twistor.hpp"

using namespace twistorlab;

namespace {

const std::array<double, 4> kX{0.21, -0.13, 0.08, 0.17};

void bm_jet_mul(benchmark::State& state) {
  Jet a = Jet::seed(6, static_cast<int>(state.range(0)), 0.7, 0);
  Jet b = Jet::seed(6, static_cast<int>(state.range(0)), -0.4, 1);
  a = a * a + b;
  b = b * a - a;
  for (auto _ : state) benchmark::DoNotOptimize(a * b);
}
BENCHMARK(bm_jet_mul)->Arg(2)->Arg(3)->Arg(4);

void bm_base_curvature(benchmark::State& state) {
  const ManifoldSpec& spec = *find_manifold("perturbed");
  MetricChart chart = chart_of(spec);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        curvature_data(chart, std::span<const double, 4>(kX)));
}
BENCHMARK(bm_base_curvature);

void bm_twistor_point(benchmark::State& state) {
  const ManifoldSpec& spec = *find_manifold("perturbed");
  MetricChart chart = chart_of(spec);
  TwistorParams prm;
  prm.t = 1.0;
  prm.n = 1;
  prm.order = 2;
  for (auto _ : state)
    benchmark::DoNotOptimize(make_twistor_point(chart, kX, 0.15, -0.3, prm));
}
BENCHMARK(bm_twistor_point);

void bm_bundle_curvature(benchmark::State& state) {
  const ManifoldSpec& spec = *find_manifold("perturbed");
  MetricChart chart = chart_of(spec);
  TwistorParams prm;
  prm.t = 1.0;
  prm.n = 1;
  prm.order = 2;
  TwistorPoint tp = make_twistor_point(chart, kX, 0.15, -0.3, prm);
  for (auto _ : state) {
    Mat<Jet> hinv = inverse(tp.h);
    T3<Jet> Gam = christoffel_jets(tp.h, hinv);
    benchmark::DoNotOptimize(connection_curvature_values(Gam));
  }
}
BENCHMARK(bm_bundle_curvature);

void bm_theorem_cell(benchmark::State& state) {
  theorems::VerifyParams p;
  p.spec = find_manifold("perturbed");
  p.t = 1.0;
  p.n = 1;
  p.samples = 4;
  for (auto _ : state)
    benchmark::DoNotOptimize(theorems::run_theorem("lemma2", p));
}
BENCHMARK(bm_theorem_cell);

}  // namespace

BENCHMARK_MAIN();
