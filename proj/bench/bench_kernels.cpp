// Parallel kernels against their serial references. The parallel variants
// use as many threads as OpenMP allows (cap with OMP_NUM_THREADS).

#include <benchmark/benchmark.h>

#include <random>

#include "commlab/profiles.hpp"
#include "commlab/reference.hpp"

namespace {

using namespace commlab;

SampledField random_field(const Grid& g, Side side) {
  std::mt19937_64 rng(42);
  std::normal_distribution<double> normal;
  SampledField u(g, side);
  for (auto& z : u.values) z = cplx{normal(rng), normal(rng)};
  return u;
}

Bump centred(double width) {
  Bump b;
  b.width = width;
  return b;
}

void BM_ShellIntegral(benchmark::State& state) {
  const SymbolSpec a = riesz_symbol(2, 1);
  const MultiIndex alpha{{1, 1, 0}};
  const int res = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(shell_integral(a, alpha, 0.5, 1.0, res));
}

void BM_ShellIntegralSerial(benchmark::State& state) {
  const SymbolSpec a = riesz_symbol(2, 1);
  const MultiIndex alpha{{1, 1, 0}};
  const int res = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(reference::shell_integral(a, alpha, 0.5, 1.0, res));
}

struct KernelSetup {
  Grid grid;
  KernelField kernel;
  SampledField b;
  SampledField u;

  explicit KernelSetup(int n)
      : grid(make_grid(1, n, 4.0)),
        kernel(compact_part_kernel(sign_symbol(), build_cutoff_chi(1), grid)),
        b(sample_bump(grid, centred(1.0))),
        u(random_field(grid, Side::spatial)) {}
};

void BM_TruncatedKernel(benchmark::State& state) {
  const KernelSetup s(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(truncated_kernel_apply(s.kernel, s.b, 0.3, s.u));
}

void BM_TruncatedKernelSerial(benchmark::State& state) {
  const KernelSetup s(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(reference::truncated_kernel_apply(s.kernel, s.b, 0.3, s.u));
}

OperatorHandle commutator_on(int n) {
  const Grid g = make_grid(1, n, 2.0);
  return OperatorHandle::commutator(sign_symbol(), true, sample_bump(g, centred(1.0)));
}

void BM_Materialize(benchmark::State& state) {
  const OperatorHandle op = commutator_on(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(materialize(op));
}

void BM_MaterializeSerial(benchmark::State& state) {
  const OperatorHandle op = commutator_on(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(reference::materialize(op));
}

void BM_ForwardFFT(benchmark::State& state) {
  const SampledField u = random_field(make_grid(2, static_cast<int>(state.range(0)), 2.0), Side::spatial);
  for (auto _ : state) benchmark::DoNotOptimize(forward_ft(u));
}

void BM_ForwardNaive(benchmark::State& state) {
  const SampledField u = random_field(make_grid(2, static_cast<int>(state.range(0)), 2.0), Side::spatial);
  for (auto _ : state) benchmark::DoNotOptimize(reference::naive_forward_ft(u));
}

}  // namespace

BENCHMARK(BM_ShellIntegral)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ShellIntegralSerial)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_TruncatedKernel)->Arg(512)->Arg(1024)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_TruncatedKernelSerial)->Arg(512)->Arg(1024)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Materialize)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_MaterializeSerial)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ForwardFFT)->Arg(16)->Arg(32)->Unit(benchmark::kMicrosecond)->UseRealTime();
BENCHMARK(BM_ForwardNaive)->Arg(16)->Arg(32)->Unit(benchmark::kMicrosecond)->UseRealTime();

BENCHMARK_MAIN();
