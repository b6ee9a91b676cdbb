#include <benchmark/benchmark.h>

#include "kore/adapter.hpp"
#include "kore/covariance.hpp"
#include "kore/rng.hpp"

namespace {

kore::Matrix seeded(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  kore::Rng rng(seed);
  kore::Matrix m(rows, cols);
  for (auto& v : m.data()) v = rng.next_gaussian();
  return m;
}

void BM_NullBasisAndInit(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  const std::size_t r = d / 4;
  const kore::Matrix x = seeded(d, d - r, 7);
  const kore::Matrix c = kore::matmul(x, kore::transpose(x));
  const kore::Matrix w0 = seeded(d, d, 11);
  for (auto _ : state) {
    const kore::NullBasis nb = kore::null_basis(c, r);
    benchmark::DoNotOptimize(kore::init_adapter(w0, kore::make_projector(nb)));
  }
}
BENCHMARK(BM_NullBasisAndInit)->Arg(16)->Arg(32)->Arg(64);

void BM_CovarianceAbsorb(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  const kore::Matrix batch = seeded(d, 64, 13);
  auto acc = kore::CovAccumulator::empty("bench", d);
  for (auto _ : state) {
    benchmark::DoNotOptimize(acc = kore::absorb(acc, batch));
  }
}
BENCHMARK(BM_CovarianceAbsorb)->Arg(16)->Arg(64)->Arg(256);

}  // namespace
