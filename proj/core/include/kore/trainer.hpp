#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "kore/model.hpp"

namespace kore {

/// Training hyperparameters; the defaults mirror the reference setup
/// (base lr 2e-4, warmup ratio 0.03, cosine decay, 6 epochs, weight
/// decay 0).
struct TrainConfig {
  double base_lr = 2e-4;
  double warmup_ratio = 0.03;
  std::size_t epochs = 6;
  std::size_t batch_size = 1;
  std::uint64_t seed = 0;
  Loss loss = Loss::mse;
  double weight_decay = 0.0;
  bool shuffle = false;

  void validate() const;
};

struct StepRecord {
  std::size_t step = 0;
  double lr = 0.0;
  double loss = 0.0;
};

struct TrainHistory {
  std::vector<StepRecord> steps;
  std::string final_checkpoint;  // set by callers that persist the result
};

/// Linear warmup from 0 to base_lr over ceil(warmup_ratio * total_steps)
/// steps, then cosine decay to 0 at total_steps. ContractError when
/// step > total_steps.
double lr_at(std::size_t step, std::size_t total_steps, const TrainConfig& cfg);

struct TrainSample {
  Matrix input;
  Matrix target;
};

/// Plain gradient descent over the trainable parameters only: adapter
/// layers update b; plain layers update w and bias. Deterministic for a
/// fixed config and dataset. NumericError (carrying the step index) when
/// the loss goes non-finite.
TrainHistory train(ToyModel& model, std::span<const TrainSample> dataset,
                   const TrainConfig& cfg);

/// Conventional adapter baseline: a ~ seeded Gaussian with std 1/sqrt(d_in),
/// b = 0, so the initial forward equals the base exactly.
AdapterPair standard_lora_init(const Matrix& w0, std::size_t r, std::uint64_t seed);

}  // namespace kore
