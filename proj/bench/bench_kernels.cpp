#include <benchmark/benchmark.h>

#include <random>

#include "lossent/sweep.hpp"
#include "lossent/tensor.hpp"
#include "lossent/witnesses.hpp"

using namespace lossent;

namespace {

CMatrix random_hermitian(std::size_t dim) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  const auto n = static_cast<Eigen::Index>(dim);
  CMatrix a(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = Complex(g(rng), g(rng));
  CMatrix h = a * a.adjoint();
  return h / h.trace().real();
}

DimVector qubits(std::size_t n) { return DimVector(std::vector<std::size_t>(n, 2)); }

void BM_PartialTrace(benchmark::State& s) {
  const DimVector d = qubits(static_cast<std::size_t>(s.range(0)));
  const auto rho = DensityMatrix::unchecked(random_hermitian(d.total()), d);
  for (auto _ : s) benchmark::DoNotOptimize(partial_trace(rho, {1, 3}));
}

void BM_PartialTraceReference(benchmark::State& s) {
  const DimVector d = qubits(static_cast<std::size_t>(s.range(0)));
  const CMatrix m = random_hermitian(d.total());
  for (auto _ : s) benchmark::DoNotOptimize(reference::partial_trace(m, d, {1, 3}));
}

void BM_PartialTranspose(benchmark::State& s) {
  const DimVector d = qubits(static_cast<std::size_t>(s.range(0)));
  const CMatrix m = random_hermitian(d.total());
  for (auto _ : s) benchmark::DoNotOptimize(partial_transpose(m, d, {0, 2}));
}

void BM_PartialTransposeReference(benchmark::State& s) {
  const DimVector d = qubits(static_cast<std::size_t>(s.range(0)));
  const CMatrix m = random_hermitian(d.total());
  for (auto _ : s) benchmark::DoNotOptimize(reference::partial_transpose(m, d, {0, 2}));
}

std::vector<std::size_t> reversed(std::size_t n) {
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = n - 1 - i;
  return order;
}

void BM_Permute(benchmark::State& s) {
  const auto n = static_cast<std::size_t>(s.range(0));
  const DimVector d = qubits(n);
  const CMatrix m = random_hermitian(d.total());
  for (auto _ : s) benchmark::DoNotOptimize(permute_subsystems(m, d, reversed(n)));
}

void BM_PermuteReference(benchmark::State& s) {
  const auto n = static_cast<std::size_t>(s.range(0));
  const DimVector d = qubits(n);
  const CMatrix m = random_hermitian(d.total());
  for (auto _ : s) benchmark::DoNotOptimize(reference::permute_subsystems(m, d, reversed(n)));
}

void BM_PptDense(benchmark::State& s) {
  const DimVector d = qubits(static_cast<std::size_t>(s.range(0)));
  const auto rho = DensityMatrix::unchecked(random_hermitian(d.total()), d);
  for (auto _ : s) benchmark::DoNotOptimize(ppt_verdict(rho, {{0}, {1, 2, 3, 4, 5, 6, 7, 8}}));
}

void BM_Sweep(benchmark::State& s) {
  SweepConfig c;
  c.family = "w_nonlinear";
  c.theta_steps = 20;
  c.phi_steps = 20;
  c.parallel = s.range(0) != 0;
  for (auto _ : s) benchmark::DoNotOptimize(run_sweep(c));
}

}  // namespace

BENCHMARK(BM_PartialTrace)->DenseRange(8, 11);
BENCHMARK(BM_PartialTraceReference)->DenseRange(8, 11);
BENCHMARK(BM_PartialTranspose)->DenseRange(8, 11);
BENCHMARK(BM_PartialTransposeReference)->DenseRange(8, 11);
BENCHMARK(BM_Permute)->DenseRange(8, 11);
BENCHMARK(BM_PermuteReference)->DenseRange(8, 11);
BENCHMARK(BM_PptDense)->Arg(9)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Sweep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
