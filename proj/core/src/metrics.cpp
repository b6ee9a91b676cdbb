#include "kore/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "kore/errors.hpp"

namespace kore {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
bool is_punct(char c) { return std::ispunct(static_cast<unsigned char>(c)) != 0; }

std::vector<std::string> split_whitespace(std::string_view text) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    std::size_t j = i;
    while (j < text.size() && !is_space(text[j])) ++j;
    if (j > i) tokens.emplace_back(text.substr(i, j - i));
    i = j;
  }
  return tokens;
}

std::string strip_boundary_punct(std::string token) {
  std::size_t lo = 0;
  std::size_t hi = token.size();
  while (lo < hi && is_punct(token[lo])) ++lo;
  while (hi > lo && is_punct(token[hi - 1])) --hi;
  return token.substr(lo, hi - lo);
}

std::string join(const std::vector<std::string>& tokens) {
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty()) out.push_back(' ');
    out += t;
  }
  return out;
}

}  // namespace

std::string normalize_text(std::string_view text) {
  return join(tokenize(text, false));
}

std::vector<std::string> tokenize(std::string_view text, bool raw) {
  std::vector<std::string> tokens = split_whitespace(text);
  if (raw) return tokens;
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (auto& t : tokens) {
    std::transform(t.begin(), t.end(), t.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    std::string stripped = strip_boundary_punct(std::move(t));
    if (!stripped.empty()) out.push_back(std::move(stripped));
  }
  return out;
}

int cem(std::string_view prediction, std::string_view gold, bool raw) {
  if (gold.empty()) throw ContractError("cem: gold answer is empty");
  if (raw) {
    return std::string_view(prediction).find(gold) != std::string_view::npos ? 1 : 0;
  }
  const std::string g = normalize_text(gold);
  if (g.empty()) throw ContractError("cem: gold answer normalizes to nothing");
  const std::string p = normalize_text(prediction);
  return p.find(g) != std::string::npos ? 1 : 0;
}

MetricResult score(std::string_view prediction, std::string_view gold, bool raw) {
  const std::vector<std::string> gold_tokens = tokenize(gold, raw);
  if (gold_tokens.empty()) throw ContractError("score: gold answer has no tokens");
  const std::vector<std::string> pred_tokens = tokenize(prediction, raw);

  const std::set<std::string> gold_set(gold_tokens.begin(), gold_tokens.end());
  const std::set<std::string> pred_set(pred_tokens.begin(), pred_tokens.end());

  std::size_t common = 0;
  for (const auto& t : gold_set) {
    if (pred_set.count(t)) ++common;
  }

  MetricResult res;
  res.cem = cem(prediction, gold, raw);
  res.precision = pred_set.empty()
                      ? 0.0
                      : static_cast<double>(common) / static_cast<double>(pred_set.size());
  res.recall = static_cast<double>(common) / static_cast<double>(gold_set.size());
  res.f1 = (res.precision + res.recall) > 0.0
               ? 2.0 * res.precision * res.recall / (res.precision + res.recall)
               : 0.0;
  return res;
}

AggregateMetrics evaluate(std::span<const std::pair<std::string, std::string>> pairs,
                          bool raw) {
  if (pairs.empty()) throw ContractError("evaluate: no pairs");
  double cem_sum = 0.0;
  double f1_sum = 0.0;
  for (const auto& [prediction, gold] : pairs) {
    const MetricResult r = score(prediction, gold, raw);
    cem_sum += r.cem;
    f1_sum += r.f1;
  }
  AggregateMetrics agg;
  agg.count = pairs.size();
  agg.cem_pct = 100.0 * cem_sum / static_cast<double>(pairs.size());
  agg.f1_pct = 100.0 * f1_sum / static_cast<double>(pairs.size());
  return agg;
}

}  // namespace kore
