#pragma once

#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace kore {

/// Lowercase, collapse whitespace runs, strip leading/trailing punctuation
/// from every token. The normalization is isolated here so `raw` mode can
/// bypass it for strict literal matching.
std::string normalize_text(std::string_view text);

std::vector<std::string> tokenize(std::string_view text, bool raw = false);

struct MetricResult {
  int cem = 0;  // 1 iff the gold answer is contained in the prediction
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// Cover Exact Match: 1 iff the (normalized) gold string occurs as a
/// contiguous substring of the (normalized) prediction. ContractError on
/// empty gold.
int cem(std::string_view prediction, std::string_view gold, bool raw = false);

/// Word-set overlap: precision = |common| / |pred words|, recall =
/// |common| / |gold words|, f1 their harmonic mean (0 when both are 0).
/// Duplicated words count once. ContractError when gold has no tokens.
MetricResult score(std::string_view prediction, std::string_view gold, bool raw = false);

struct AggregateMetrics {
  double cem_pct = 0.0;  // mean * 100
  double f1_pct = 0.0;   // mean * 100
  std::size_t count = 0;
};

/// Arithmetic means over (prediction, gold) pairs, scaled to percent.
AggregateMetrics evaluate(std::span<const std::pair<std::string, std::string>> pairs,
                          bool raw = false);

}  // namespace kore
