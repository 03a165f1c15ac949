// Serial reference vs OpenMP for each parallel kernel. Both variants produce
// bit-identical results, so only time differs.

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "colombeau/hermite.hpp"
#include "colombeau/operators.hpp"
#include "colombeau/parallel.hpp"
#include "colombeau/quadrature.hpp"
#include "colombeau/seminorms.hpp"

using namespace colombeau;

namespace {

parallel::Execution mode(const benchmark::State& state) {
  return state.range(0) ? parallel::Execution::openmp : parallel::Execution::serial;
}

void label(benchmark::State& state) { state.SetLabel(state.range(0) ? "openmp" : "serial"); }

void BM_Fill(benchmark::State& state) {
  std::vector<double> out(1 << 16);
  for (auto _ : state) {
    parallel::fill(out, [](std::size_t i) { return std::exp(-1e-5 * i) * std::sin(0.01 * i); }, mode(state));
    benchmark::DoNotOptimize(out.data());
  }
  label(state);
}

void BM_Matvec(benchmark::State& state) {
  const std::size_t n = 1024;
  std::vector<double> m(n * n);
  std::vector<double> x(n);
  std::vector<double> y(n);
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = std::cos(0.001 * i);
  for (std::size_t i = 0; i < n; ++i) x[i] = 1.0 / (1.0 + i);
  for (auto _ : state) {
    parallel::matvec(m, n, n, x, y, mode(state));
    benchmark::DoNotOptimize(y.data());
  }
  label(state);
}

void BM_DampedQuadrature2D(benchmark::State& state) {
  const Integrand f = [](std::span<const double> y) { return std::cos(y[0]) * std::exp(-0.1 * y[1] * y[1]); };
  DampedOptions o;
  o.nodes = 128;
  o.execution = mode(state);
  for (auto _ : state) benchmark::DoNotOptimize(integrate_damped(f, 2, 0.01, 0.0, o).value);
  label(state);
}

void BM_DerivativeSamples(benchmark::State& state) {
  const ScalarField f = multiply(hermite_field(6), gaussian_field(1, 1.0, 0.2));
  SeminormOptions o;
  o.execution = mode(state);
  for (auto _ : state) {
    benchmark::DoNotOptimize(DerivativeSamples::compute(f, 2, SamplingBox{8.0, 4001}, o).mu(0).value);
  }
  label(state);
}

void BM_ExpApply(benchmark::State& state) {
  parallel::set_default_execution(mode(state));
  const EpsilonGrid grid = EpsilonGrid::geometric(6);
  const ScalarField k = gaussian_field(2, 1.0, 1.0);
  const GeneralizedOperator A(KernelNet::generate(grid, 1, [&](double) { return k; }, KernelDecay{1.0, 1.0}));
  const FunctionNet phi = FunctionNet::generate(grid, [](double) { return constant_field(1, 1.0); });
  for (auto _ : state) benchmark::DoNotOptimize(exp_apply(A, phi, 0.125, Point{0.0}, 20, 1e-16).value);
  label(state);
}

}  // namespace

BENCHMARK(BM_Fill)->Arg(0)->Arg(1);
BENCHMARK(BM_Matvec)->Arg(0)->Arg(1);
BENCHMARK(BM_DampedQuadrature2D)->Arg(0)->Arg(1);
BENCHMARK(BM_DerivativeSamples)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExpApply)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
