#pragma once

// Shared scenario builders for the trainer and cosvd suites.

#include <vector>

#include "kore/adapter.hpp"
#include "kore/cosvd.hpp"
#include "kore/covariance.hpp"
#include "kore/model.hpp"
#include "kore/trainer.hpp"

#include "support/oracles.hpp"

namespace testsupport {

// Old/new two-subspace regression scenario: old-task activations span a
// 5-dim subspace of R^8 (so the covariance has an exact 3-dim null space),
// the new task lives entirely in those null directions.
struct RetentionFixture {
  kore::Matrix w0;
  kore::Matrix c;  // old-task covariance, rank 5
  kore::NullBasis nb;
  kore::ToyModel kore_model;      // null-space initialized adapter
  kore::ToyModel baseline_model;  // standard Gaussian-A adapter
  std::vector<kore::TrainSample> new_task;
  kore::Matrix old_inputs;  // held out, inside the old-task subspace
};

inline RetentionFixture make_retention_fixture(std::uint64_t seed) {
  constexpr std::size_t dim = 8;
  constexpr std::size_t old_rank = 5;
  constexpr std::size_t adapter_rank = 3;

  kore::Rng rng(seed);
  RetentionFixture fx;

  const kore::Matrix basis_old = random_orthonormal(rng, dim, old_rank);
  const kore::Matrix x_old = kore::matmul(basis_old, random_matrix(rng, old_rank, 40));
  fx.c = kore::matmul(x_old, kore::transpose(x_old));
  fx.w0 = random_matrix(rng, dim, dim, 0.7);

  fx.nb = kore::null_basis(fx.c, adapter_rank);
  kore::AdapterInit init = kore::init_adapter(fx.w0, kore::make_projector(fx.nb));

  kore::LinearLayer kore_layer;
  kore_layer.layer_id = "layer0";
  kore_layer.w = init.w0_prime;
  kore_layer.adapter = init.pair;
  kore_layer.activation = kore::Activation::identity;
  fx.kore_model.input_dim = dim;
  fx.kore_model.layers.push_back(kore_layer);

  kore::LinearLayer base_layer;
  base_layer.layer_id = "layer0";
  base_layer.w = fx.w0;
  base_layer.adapter = kore::standard_lora_init(fx.w0, adapter_rank, seed + 1);
  base_layer.activation = kore::Activation::identity;
  fx.baseline_model.input_dim = dim;
  fx.baseline_model.layers.push_back(base_layer);

  // New-task inputs are exact null-space directions, targets are offset
  // from the base map so training has something to chase.
  for (int s = 0; s < 6; ++s) {
    const kore::Matrix x = kore::matmul(fx.nb.u_hat, random_matrix(rng, adapter_rank, 5));
    kore::Matrix y = kore::matmul(fx.w0, x);
    const kore::Matrix offset = random_matrix(rng, dim, 5, 1.0);
    y = y + offset;
    fx.new_task.push_back(kore::TrainSample{x, y});
  }

  fx.old_inputs = kore::matmul(basis_old, random_matrix(rng, old_rank, 12));
  return fx;
}

inline kore::TrainConfig retention_train_config(std::size_t steps) {
  kore::TrainConfig cfg;
  cfg.base_lr = 2e-3;
  cfg.warmup_ratio = 0.03;
  cfg.epochs = steps;  // whole dataset per batch: one step per epoch
  cfg.batch_size = 64;
  cfg.loss = kore::Loss::mse;
  return cfg;
}

// Two-task scenario for the knowledge-capture study: one linear map, eval
// sets on two disjoint 2-dim input subspaces, covariance captured on task
// A only.
struct TwoTaskFixture {
  kore::ToyModel model;
  std::map<std::string, kore::CovAccumulator> covs;  // task-A covariance
  std::vector<kore::EvalSet> eval_sets;              // "taskA", "taskB"
};

inline TwoTaskFixture make_two_task_fixture(std::uint64_t seed) {
  constexpr std::size_t dim = 8;
  kore::Rng rng(seed);

  TwoTaskFixture fx;
  kore::LinearLayer layer;
  layer.layer_id = "layer0";
  layer.w = random_matrix(rng, dim, dim);
  layer.activation = kore::Activation::identity;
  fx.model.input_dim = dim;
  fx.model.layers.push_back(layer);

  const kore::Matrix basis_a = random_orthonormal(rng, dim, 2);
  const kore::Matrix basis_b = random_orthonormal(rng, dim, 2);

  const auto make_set = [&](const std::string& name, const kore::Matrix& basis) {
    kore::EvalSet set;
    set.name = name;
    for (int s = 0; s < 4; ++s) {
      const kore::Matrix x = kore::matmul(basis, random_matrix(rng, 2, 6));
      set.data.push_back(kore::TrainSample{x, kore::matmul(fx.model.layers[0].w, x)});
    }
    return set;
  };
  fx.eval_sets.push_back(make_set("taskA", basis_a));
  fx.eval_sets.push_back(make_set("taskB", basis_b));

  kore::CovAccumulator acc = kore::CovAccumulator::empty("layer0", dim);
  for (const auto& sample : fx.eval_sets[0].data) acc = kore::absorb(acc, sample.input);
  fx.covs.emplace("layer0", std::move(acc));
  return fx;
}

}  // namespace testsupport
