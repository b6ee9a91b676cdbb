#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>

#include "kore/matrix.hpp"
#include "kore/model.hpp"

namespace kore {

/// Running unnormalized covariance C = X X^T of a layer's input
/// activations, with the number of absorbed activation columns.
struct CovAccumulator {
  std::string layer_id;
  std::size_t dim = 0;
  Matrix c;  // dim x dim
  std::uint64_t tokens = 0;

  static CovAccumulator empty(std::string layer_id, std::size_t dim);

  /// C / tokens; the normalized view used for CO-SVD conditioning only.
  Matrix normalized() const;
};

/// c' = c + x_batch * x_batch^T, tokens' = tokens + columns(x_batch).
CovAccumulator absorb(const CovAccumulator& acc, const Matrix& x_batch);

/// Entry-wise sum of two shards of the same layer. IdentityError when the
/// layer ids or dimensions differ.
CovAccumulator merge(const CovAccumulator& a, const CovAccumulator& b);

/// Runs every input through the model and feeds each linear layer's input
/// activations into that layer's accumulator. Model weights are untouched.
std::map<std::string, CovAccumulator> capture(const ToyModel& model,
                                              std::span<const Matrix> inputs);

/// Writes <layer_id>.cov (KOREMAT1) plus the <layer_id>.cov.json sidecar
/// {"layer_id", "dim", "tokens"} into `dir`.
void save_accumulator(const CovAccumulator& acc, const std::filesystem::path& dir);

/// Loads from the .cov path; the sidecar must sit next to it.
CovAccumulator load_accumulator(const std::filesystem::path& cov_path);

/// All <layer_id>.cov files in a directory, keyed by layer id.
std::map<std::string, CovAccumulator> load_accumulator_dir(const std::filesystem::path& dir);

}  // namespace kore
