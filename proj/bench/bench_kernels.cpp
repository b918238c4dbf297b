// Serial reference vs OpenMP kernels on dense random matrices.
#include <benchmark/benchmark.h>

#include "ssq/exactla.hpp"
#include "ssq/sample.hpp"

using namespace ssq;

namespace {

Field field_for(int64_t code) { return code == 0 ? Field::rational() : Field::prime(static_cast<long>(code)); }

template <Matrix (*Mul)(const Matrix&, const Matrix&)>
void BM_matmul(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(1);
  const Field f = field_for(state.range(1));
  Matrix a = random_matrix(f, n, n, rng), b = random_matrix(f, n, n, rng);
  for (auto _ : state) benchmark::DoNotOptimize(Mul(a, b));
  state.SetComplexityN(state.range(0));
}

template <Echelon (*Rref)(Matrix&)>
void BM_rref(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(2);
  const Field f = field_for(state.range(1));
  const Matrix m = random_matrix(f, n, n, rng);
  for (auto _ : state) {
    state.PauseTiming();
    Matrix work = m;
    state.ResumeTiming();
    benchmark::DoNotOptimize(Rref(work));
  }
  state.SetComplexityN(state.range(0));
}

// second argument: 0 for Q, otherwise the prime
void sizes(benchmark::internal::Benchmark* b) {
  for (int64_t p : {101, 0})
    for (int64_t n : {16, 32, 64, 128}) b->Args({n, p});
}

}  // namespace

BENCHMARK(BM_matmul<kernels::matmul_serial>)->Name("matmul_serial")->Apply(sizes);
BENCHMARK(BM_matmul<kernels::matmul_omp>)->Name("matmul_omp")->Apply(sizes);
BENCHMARK(BM_rref<kernels::rref_serial>)->Name("rref_serial")->Apply(sizes);
BENCHMARK(BM_rref<kernels::rref_omp>)->Name("rref_omp")->Apply(sizes);

BENCHMARK_MAIN();
