// Microbenchmarks for the hot paths: operator assembly, the penalized step
// solve, coefficient cache refresh, and the sparse CG kernel.

#include <benchmark/benchmark.h>

#include "lagfsi/flow_map.hpp"
#include "lagfsi/mesh.hpp"
#include "lagfsi/space.hpp"
#include "lagfsi/stepper.hpp"

namespace {

const lagfsi::Mesh& bench_mesh() {
  static const lagfsi::Mesh mesh = [] {
    lagfsi::GeometryConfig geom;
    geom.container_radius = 1.0;
    geom.h = 0.2;
    geom.solids.push_back({0.0, 0.0, 0.5});
    return lagfsi::build_reference_config(geom);
  }();
  return mesh;
}

const lagfsi::VelocitySpace& bench_space() {
  static const lagfsi::VelocitySpace space(bench_mesh());
  return space;
}

void BM_AssembleMass(benchmark::State& state) {
  const auto& space = bench_space();
  for (auto _ : state) benchmark::DoNotOptimize(lagfsi::assemble_mass(space));
}
BENCHMARK(BM_AssembleMass);

void BM_AssembleStepOperators(benchmark::State& state) {
  const auto& space = bench_space();
  const lagfsi::FluidScalarSpace scalar(bench_mesh());
  const lagfsi::FrozenCoefficients coeffs = lagfsi::identity_coefficients(space)(0.0);
  const lagfsi::Vec q0(scalar.num_nodes(), 0.0);
  lagfsi::MaterialParams params;
  for (auto _ : state)
    benchmark::DoNotOptimize(
        lagfsi::assemble_step_operators(space, scalar, coeffs, q0, q0, params, 1e-4));
}
BENCHMARK(BM_AssembleStepOperators);

void BM_CoefficientRefresh(benchmark::State& state) {
  const auto& space = bench_space();
  lagfsi::FlowMapState flow(space);
  const lagfsi::Vec v = space.interpolate([](const lagfsi::Vec3& x) {
    return lagfsi::Vec3{{-0.1 * x[1], 0.1 * x[0], 0.0}};
  });
  for (auto _ : state) {
    flow.set_displacement(v, 0.0);
    benchmark::DoNotOptimize(flow.invertibility_check());
  }
}
BENCHMARK(BM_CoefficientRefresh);

void BM_ConjugateGradientH1(benchmark::State& state) {
  const auto& space = bench_space();
  const lagfsi::CsrMatrix H = space.h1_matrix();
  lagfsi::Vec b(H.size(), 1.0);
  for (auto _ : state) {
    lagfsi::Vec x(b.size(), 0.0);
    benchmark::DoNotOptimize(lagfsi::conjugate_gradient(H, b, x, 1e-10, 10000));
  }
}
BENCHMARK(BM_ConjugateGradientH1);

}  // namespace

BENCHMARK_MAIN();
