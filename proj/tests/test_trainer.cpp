#include <cmath>

#include "doctest.h"

#include "kore/trainer.hpp"

#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using kore::Matrix;
using kore::TrainConfig;
namespace ts = testsupport;

TEST_SUITE_BEGIN("trainer");

TEST_CASE("lr_at: warmup ramp and cosine endpoints") {
  TrainConfig cfg;  // base_lr 2e-4, warmup_ratio 0.03
  CHECK(kore::lr_at(0, 1000, cfg) == 0.0);
  CHECK(kore::lr_at(30, 1000, cfg) == doctest::Approx(2e-4).epsilon(1e-12));
  CHECK(std::fabs(kore::lr_at(1000, 1000, cfg)) <= 1e-12);
  CHECK_THROWS_AS(kore::lr_at(1001, 1000, cfg), kore::ContractError);
}

TEST_CASE("lr_at: non-decreasing through warmup, non-increasing after") {
  TrainConfig cfg;
  cfg.warmup_ratio = 0.1;
  const std::size_t total = 200;
  const std::size_t warmup = 20;
  double prev = kore::lr_at(0, total, cfg);
  for (std::size_t s = 1; s <= total; ++s) {
    const double lr = kore::lr_at(s, total, cfg);
    CHECK(lr >= 0.0);
    if (s <= warmup) {
      CHECK(lr >= prev);
    } else {
      CHECK(lr <= prev + 1e-18);
    }
    prev = lr;
  }
}

TEST_CASE("train: matched targets are a fixed point") {
  kore::Rng rng(11);
  kore::ToyModel model;
  model.input_dim = 3;
  kore::LinearLayer layer;
  layer.layer_id = "w";
  layer.w = ts::random_matrix(rng, 3, 3);
  layer.activation = kore::Activation::identity;
  model.layers = {layer};

  const Matrix x = ts::random_matrix(rng, 3, 5);
  const std::vector<kore::TrainSample> data = {{x, kore::forward(model, x)}};
  const std::uint64_t before = ts::bits_hash(model.layers[0].w);

  TrainConfig cfg;
  cfg.base_lr = 0.1;
  cfg.epochs = 20;
  const kore::TrainHistory history = kore::train(model, data, cfg);
  CHECK(ts::bits_hash(model.layers[0].w) == before);
  CHECK(history.steps.back().loss == 0.0);
}

TEST_CASE("train: linear regression reaches the least-squares optimum") {
  kore::Rng rng(13);
  kore::ToyModel model;
  model.input_dim = 3;
  kore::LinearLayer layer;
  layer.layer_id = "w";
  layer.w = ts::random_matrix(rng, 2, 3, 0.1);
  layer.activation = kore::Activation::identity;
  model.layers = {layer};

  const Matrix x = ts::random_matrix(rng, 3, 40);
  const Matrix w_true = ts::random_matrix(rng, 2, 3);
  Matrix y = kore::matmul(w_true, x);
  for (auto& v : y.data()) v += 0.05 * rng.next_gaussian();

  const std::vector<kore::TrainSample> data = {{x, y}};
  TrainConfig cfg;
  cfg.epochs = 200;  // one batch per epoch: 200 steps
  cfg.batch_size = 1;
  cfg.warmup_ratio = 0.03;
  // Stability bound: lr < 1 / (2 sigma_max(x x^T)).
  const ts::EigResult eig = ts::jacobi_eig(kore::matmul(x, kore::transpose(x)));
  cfg.base_lr = 0.45 / eig.values.front();
  kore::train(model, data, cfg);

  // Normal-equations oracle: W_ls = Y X^T (X X^T)^-1.
  const Matrix w_ls = kore::matmul(kore::matmul(y, kore::transpose(x)),
                                   kore::inverse(kore::matmul(x, kore::transpose(x))));
  const double loss_opt =
      kore::loss_value(kore::Loss::mse, kore::matmul(w_ls, x), y);
  const double loss_fin =
      kore::loss_value(kore::Loss::mse, kore::forward(model, x), y);
  CHECK(loss_fin - loss_opt <= 1e-6);
}

TEST_CASE("train: frozen parameters are bit-identical before and after") {
  ts::RetentionFixture fx = ts::make_retention_fixture(17);
  const std::uint64_t a_hash = ts::bits_hash(fx.kore_model.layers[0].adapter->a);
  const std::uint64_t w_hash = ts::bits_hash(fx.kore_model.layers[0].w);
  const std::uint64_t b_hash = ts::bits_hash(fx.kore_model.layers[0].adapter->b);

  kore::train(fx.kore_model, fx.new_task, ts::retention_train_config(50));
  CHECK(ts::bits_hash(fx.kore_model.layers[0].adapter->a) == a_hash);
  CHECK(ts::bits_hash(fx.kore_model.layers[0].w) == w_hash);
  CHECK(ts::bits_hash(fx.kore_model.layers[0].adapter->b) != b_hash);  // it did train
}

TEST_CASE("train: constrained adapter preserves old-task outputs") {
  ts::RetentionFixture fx = ts::make_retention_fixture(19);
  const Matrix before = kore::forward(fx.kore_model, fx.old_inputs);
  kore::train(fx.kore_model, fx.new_task, ts::retention_train_config(100));
  const Matrix after = kore::forward(fx.kore_model, fx.old_inputs);
  CHECK(kore::frobenius(after - before) / kore::frobenius(before) <= 1e-8);
}

TEST_CASE("train: identical seeds give bit-identical histories") {
  ts::RetentionFixture fx1 = ts::make_retention_fixture(23);
  ts::RetentionFixture fx2 = ts::make_retention_fixture(23);
  TrainConfig cfg = ts::retention_train_config(40);
  cfg.shuffle = true;
  cfg.seed = 5;
  const kore::TrainHistory h1 = kore::train(fx1.kore_model, fx1.new_task, cfg);
  const kore::TrainHistory h2 = kore::train(fx2.kore_model, fx2.new_task, cfg);
  REQUIRE(h1.steps.size() == h2.steps.size());
  for (std::size_t i = 0; i < h1.steps.size(); ++i) {
    CHECK(h1.steps[i].loss == h2.steps[i].loss);
    CHECK(h1.steps[i].lr == h2.steps[i].lr);
  }
  CHECK(ts::bits_equal(fx1.kore_model.layers[0].adapter->b,
                       fx2.kore_model.layers[0].adapter->b));
}

TEST_CASE("train: non-finite loss aborts with the step index") {
  kore::ToyModel model;
  model.input_dim = 1;
  kore::LinearLayer layer;
  layer.layer_id = "w";
  layer.w = Matrix::from_rows({{1.0}});
  layer.activation = kore::Activation::identity;
  model.layers = {layer};

  const Matrix x = Matrix::from_rows({{1e160}});
  const std::vector<kore::TrainSample> data = {{x, Matrix(1, 1)}};
  TrainConfig cfg;
  cfg.base_lr = 1.0;
  cfg.warmup_ratio = 0.0;
  cfg.epochs = 10;
  CHECK_THROWS_AS(kore::train(model, data, cfg), kore::NumericError);
}

TEST_CASE("train rejects an empty dataset") {
  kore::ToyModel model;
  model.input_dim = 1;
  TrainConfig cfg;
  CHECK_THROWS_AS(kore::train(model, std::vector<kore::TrainSample>{}, cfg),
                  kore::ContractError);
}

TEST_CASE("standard_lora_init: zero b reproduces the base exactly") {
  kore::Rng rng(29);
  const Matrix w0 = ts::random_matrix(rng, 4, 4);
  const kore::AdapterPair pair = kore::standard_lora_init(w0, 2, 99);
  CHECK(kore::frobenius(pair.b) == 0.0);

  kore::ToyModel model;
  model.input_dim = 4;
  kore::LinearLayer layer;
  layer.layer_id = "w";
  layer.w = w0;
  layer.adapter = pair;
  layer.activation = kore::Activation::identity;
  model.layers = {layer};

  const Matrix x = ts::random_matrix(rng, 4, 3);
  CHECK(ts::bits_equal(kore::forward(model, x), kore::matmul(w0, x)));
}

TEST_CASE("standard_lora_init: same seed, same bits") {
  const Matrix w0 = Matrix::identity(5);
  const kore::AdapterPair p1 = kore::standard_lora_init(w0, 3, 1234);
  const kore::AdapterPair p2 = kore::standard_lora_init(w0, 3, 1234);
  CHECK(ts::bits_equal(p1.a, p2.a));
}

TEST_CASE("baseline drifts where the constrained adapter holds still") {
  ts::RetentionFixture fx = ts::make_retention_fixture(31);
  const TrainConfig cfg = ts::retention_train_config(150);

  const Matrix kore_before = kore::forward(fx.kore_model, fx.old_inputs);
  kore::train(fx.kore_model, fx.new_task, cfg);
  const double kore_drift =
      kore::frobenius(kore::forward(fx.kore_model, fx.old_inputs) - kore_before) /
      kore::frobenius(kore_before);

  const Matrix base_before = kore::forward(fx.baseline_model, fx.old_inputs);
  kore::train(fx.baseline_model, fx.new_task, cfg);
  const double base_drift =
      kore::frobenius(kore::forward(fx.baseline_model, fx.old_inputs) - base_before) /
      kore::frobenius(base_before);

  CHECK(kore_drift <= 1e-8);
  CHECK(base_drift >= 1e-2);
}

TEST_SUITE_END();
