#include <benchmark/benchmark.h>

#include "kore/matrix.hpp"
#include "kore/rng.hpp"
#include "kore/svd.hpp"

namespace {

kore::Matrix seeded(std::size_t rows, std::size_t cols) {
  kore::Rng rng(rows * 131 + cols);
  kore::Matrix m(rows, cols);
  for (auto& v : m.data()) v = rng.next_gaussian();
  return m;
}

void BM_Matmul(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const kore::Matrix a = seeded(n, n);
  const kore::Matrix b = seeded(n, n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(kore::matmul(a, b));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Matmul)->RangeMultiplier(2)->Range(8, 128)->Complexity();

void BM_JacobiSvd(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const kore::Matrix m = seeded(n, n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(kore::svd(m));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_JacobiSvd)->RangeMultiplier(2)->Range(8, 64)->Complexity();

void BM_SvdRankDeficient(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const kore::Matrix m = kore::matmul(seeded(n, n / 2), seeded(n / 2, n));
  for (auto _ : state) {
    benchmark::DoNotOptimize(kore::svd(m));
  }
}
BENCHMARK(BM_SvdRankDeficient)->Arg(16)->Arg(32)->Arg(64);

}  // namespace

BENCHMARK_MAIN();
