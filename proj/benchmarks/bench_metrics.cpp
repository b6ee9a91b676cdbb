#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "kore/metrics.hpp"
#include "kore/rng.hpp"

namespace {

std::vector<std::pair<std::string, std::string>> seeded_pairs(std::size_t n) {
  const char* vocab[10] = {"alpha", "beta",  "gamma", "delta", "paris",
                           "york",  "tokyo", "cairo", "lima",  "oslo"};
  kore::Rng rng(17);
  std::vector<std::pair<std::string, std::string>> pairs;
  pairs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::string pred, gold;
    for (std::size_t t = 0; t < 12; ++t) {
      if (!pred.empty()) pred += ' ';
      pred += vocab[rng.next_index(10)];
    }
    for (std::size_t t = 0; t < 3; ++t) {
      if (!gold.empty()) gold += ' ';
      gold += vocab[rng.next_index(10)];
    }
    pairs.emplace_back(pred, gold);
  }
  return pairs;
}

void BM_Evaluate(benchmark::State& state) {
  const auto pairs = seeded_pairs(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(kore::evaluate(pairs));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Evaluate)->Arg(100)->Arg(1000);

}  // namespace
