#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "kore/trainer.hpp"

namespace kore {

/// Dataset JSONL: one record per line, {"input": [[...] ...]} with an
/// optional "target" of the same layout; matrices are row-major nested
/// arrays of doubles.
std::vector<TrainSample> load_dataset(const std::filesystem::path& path);

/// Inputs only; records without a target are fine here.
std::vector<Matrix> load_inputs(const std::filesystem::path& path);

void save_dataset(std::span<const TrainSample> samples, const std::filesystem::path& path);
void save_inputs(std::span<const Matrix> inputs, const std::filesystem::path& path);

}  // namespace kore
